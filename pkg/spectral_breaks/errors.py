""" Exceptions and warnings raised by spectral_breaks.

Exceptions subclass ValueError or RuntimeError so code catching the built-in types keeps working.  The command line
front end maps each exception class to its own exit code.
"""


class InvalidArgumentError(ValueError):
    """ Raised when an argument is outside of its allowed range. """
    pass


class InvalidDataError(ValueError):
    """ Raised when input data is malformed, e.g., contains non-finite values or has the wrong number of columns. """
    pass


class UnderdeterminedFitError(ValueError):
    """ Raised when a basis fit has fewer (or linearly dependent) grid points than basis functions. """
    pass


class ConfigError(ValueError):
    """ Raised when a configuration file or configuration object is invalid. """
    pass


class DegenerateSpectrumError(RuntimeError):
    """ Raised when the sample covariance operator has no variation (all eigenvalues are zero). """
    pass


class SingularLRVError(RuntimeError):
    """ Raised when a long-run covariance estimate cannot be inverted.

    Attributes:
        min_eig: The smallest eigenvalue (or variance) of the offending estimate.
    """

    def __init__(self, msg: str, min_eig: float = float('nan')):
        """ Creates a new SingularLRVError.

        Args:
            msg: The error message.

            min_eig: The smallest eigenvalue (or variance) of the offending long-run covariance estimate.
        """
        super().__init__(msg)
        self.min_eig = min_eig


class ClippedEigenvalueWarning(RuntimeWarning):
    """ Issued when negative eigenvalues larger in magnitude than round-off are clipped to zero. """
    pass


class SpectralGapWarning(RuntimeWarning):
    """ Issued when the gap between the d-th and (d+1)-th eigenvalues is numerically zero. """
    pass


class LRVFloorWarning(RuntimeWarning):
    """ Issued when a negative long-run variance estimate is floored at machine epsilon. """
    pass
