""" Contains tools for generating functional time series with and without breaks in their covariance structure.

Curves are generated through their coefficients in a Fourier basis.  Coefficient ell of an innovation has standard
deviation sigma_ell, where sigma decays either fast (sigma_ell = 3^-ell) or slowly (sigma_ell = 1/ell).  A break at
k* = floor(tau*n) multiplies the standard deviations of all curves after k* entry-wise by a vector b.

Curves are either independent or follow a functional autoregression x_i = kappa*Psi0 x_{i-1} + zeta_i, where Psi0 is a
random Gaussian matrix with entry (a, b) having standard deviation sigma_a*sigma_b, rescaled to unit norm.
"""

import math
from typing import Sequence

import numpy as np

from spectral_breaks.errors import InvalidArgumentError
from spectral_breaks.fda.basis import BasisSystem, FunctionalSeries, fourier_basis

DECAYS = ('fast', 'slow')
DEPENDENCES = ('iid', 'far1')
OPERATOR_NORMS = ('spectral', 'frobenius')

# 0 denotes the null setting without a break
SETTINGS = (0, 1, 2, 3, 4)


def decay_sds(decay: str, n_basis: int) -> np.ndarray:
    """ Returns the innovation standard deviations sigma_1, ..., sigma_D for a decay profile.

    Args:
        decay: 'fast' for sigma_ell = 3^-ell or 'slow' for sigma_ell = 1/ell.

        n_basis: The number of basis functions D.

    Returns:
        sds: Array of length n_basis.
    """
    ell = np.arange(1, n_basis + 1, dtype=float)
    if decay == 'fast':
        return 3.0**(-ell)
    elif decay == 'slow':
        return 1.0/ell
    else:
        raise(InvalidArgumentError('decay must be one of ' + ', '.join(DECAYS) + '; got ' + str(decay) + '.'))


def setting_multipliers(setting: int, b: float, n_basis: int = 21) -> np.ndarray:
    """ Builds the break multiplier vector for one of the simulation settings.

    Setting 1, 2 and 3 multiply the standard deviation of coefficient 1, 2 or 3 by b.  Setting 4 multiplies the first
    three coefficients by b.  Setting 0 is the null setting with all multipliers equal to 1.

    Args:
        setting: The setting, one of 0, ..., 4.

        b: The break size.

        n_basis: The number of basis functions D.

    Returns:
        mults: The length n_basis multiplier vector.
    """
    if setting not in SETTINGS:
        raise(InvalidArgumentError('setting must be one of 0, 1, 2, 3 or 4; got ' + str(setting) + '.'))
    if setting != 0 and n_basis < 3:
        raise(InvalidArgumentError('Settings 1-4 need at least 3 basis functions.'))
    if not b > 0:
        raise(InvalidArgumentError('b must be positive; got ' + str(b) + '.'))

    mults = np.ones(n_basis)
    if setting in (1, 2, 3):
        mults[setting - 1] = b
    elif setting == 4:
        mults[0:3] = b
    return mults


def default_b_grid(setting: int) -> Sequence[float]:
    """ Returns the break sizes studied for a setting. """
    if setting == 0:
        return (1.0,)
    elif setting == 4:
        return (1.0, 1.25, 1.5, 1.75, 2.0)
    elif setting in SETTINGS:
        return (1.0, 1.5, 2.0, 3.0, 5.0)
    raise(InvalidArgumentError('setting must be one of 0, 1, 2, 3 or 4; got ' + str(setting) + '.'))


class DgpSpec:
    """ Specifies a data generating process for a functional time series. """

    def __init__(self, n_curves: int, n_basis: int = 21, decay: str = 'slow', dependence: str = 'iid',
                 kappa: float = .8, tau: float = None, b: Sequence[float] = None, seed: int = 0,
                 operator_norm: str = 'spectral'):
        """ Creates a new DgpSpec object.

        Args:
            n_curves: The sample size n.

            n_basis: The number of Fourier basis functions D.

            decay: 'fast' or 'slow'.

            dependence: 'iid' or 'far1'.

            kappa: The norm of the autoregressive operator, in (-1, 1).  Only used when dependence is 'far1'.

            tau: The break location as a fraction of n, in (0, 1).  None for no break.

            b: The length D vector of positive break multipliers.  Must be given exactly when tau is.

            seed: Seed of the random generator.

            operator_norm: 'spectral' or 'frobenius', the norm the autoregressive matrix is rescaled with.

        Raises:
            InvalidArgumentError: If any field is invalid.
        """
        if int(n_curves) != n_curves or n_curves < 2:
            raise(InvalidArgumentError('n_curves must be an integer of at least 2.'))
        if int(n_basis) != n_basis or n_basis < 1:
            raise(InvalidArgumentError('n_basis must be a positive integer.'))
        if decay not in DECAYS:
            raise(InvalidArgumentError('decay must be one of ' + ', '.join(DECAYS) + '; got ' + str(decay) + '.'))
        if dependence not in DEPENDENCES:
            raise(InvalidArgumentError('dependence must be one of ' + ', '.join(DEPENDENCES) + '; got ' +
                                       str(dependence) + '.'))
        if not (-1 < kappa < 1):
            raise(InvalidArgumentError('kappa must be in (-1, 1); got ' + str(kappa) + '.'))
        if operator_norm not in OPERATOR_NORMS:
            raise(InvalidArgumentError('operator_norm must be one of ' + ', '.join(OPERATOR_NORMS) + '.'))
        if (tau is None) != (b is None):
            raise(InvalidArgumentError('tau and b must either both be given or both be None.'))
        if tau is not None:
            if not (0 < tau < 1):
                raise(InvalidArgumentError('tau must be in (0, 1); got ' + str(tau) + '.'))
            b = np.asarray(b, dtype=float)
            if b.shape != (n_basis,):
                raise(InvalidArgumentError('b must have length n_basis = ' + str(n_basis) + '.'))
            if not np.all(np.isfinite(b)) or np.any(b <= 0):
                raise(InvalidArgumentError('Entries of b must be positive and finite.'))
        if int(seed) != seed or seed < 0 or seed >= 2**64:
            raise(InvalidArgumentError('seed must be an integer in [0, 2^64).'))

        self.n_curves = int(n_curves)
        self.n_basis = int(n_basis)
        self.decay = decay
        self.dependence = dependence
        self.kappa = kappa
        self.tau = tau
        self.b = b
        self.seed = int(seed)
        self.operator_norm = operator_norm

    @property
    def break_index(self) -> int:
        """ The break date k* = floor(tau*n), or n if there is no break.  Curves k*+1, ..., n are post-break. """
        if self.tau is None:
            return self.n_curves
        return int(math.floor(round(self.tau*self.n_curves, 9)))

    def to_dict(self) -> dict:
        return {'n_curves': self.n_curves, 'n_basis': self.n_basis, 'decay': self.decay,
                'dependence': self.dependence, 'kappa': self.kappa, 'tau': self.tau,
                'b': None if self.b is None else [float(v) for v in self.b], 'seed': self.seed,
                'operator_norm': self.operator_norm}

    @classmethod
    def from_dict(cls, d: dict):
        return cls(**d)


def _ar_matrix(z: np.ndarray, sds: np.ndarray, kappa: float, operator_norm: str) -> np.ndarray:
    """ Forms kappa*Psi0 with Psi0 = z*(sds sds^T) rescaled to unit norm. """
    psi0 = z*np.outer(sds, sds)
    nrm = np.linalg.norm(psi0, 2) if operator_norm == 'spectral' else np.linalg.norm(psi0, 'fro')
    return kappa*psi0/nrm


def gen_series(spec: DgpSpec, rng: np.random.Generator = None, basis: BasisSystem = None) -> FunctionalSeries:
    """ Generates a functional time series.

    Random numbers are drawn in a fixed order (for 'far1': the autoregressive matrix, then the burn-in innovations,
    then the innovations of the kept curves), and all standard normal draws are made before scaling, so a break with
    b = (1, ..., 1) reproduces the series without a break exactly.

    Under 'far1', ceil(n/2) burn-in curves are generated under the pre-break regime and discarded.  After the break,
    the recursion continues from the last pre-break curve with the post-break operator and innovations.

    Args:
        spec: The data generating process.

        rng: Random generator to draw from.  If None, numpy.random.default_rng(spec.seed) is used.

        basis: The basis of the series.  Defaults to a Fourier basis with spec.n_basis functions.

    Returns:
        series: The generated series of spec.n_curves curves.
    """
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    if basis is None:
        basis = fourier_basis(spec.n_basis)

    n_curves = spec.n_curves
    n_basis = spec.n_basis
    k_star = spec.break_index

    sds_pre = decay_sds(spec.decay, n_basis)
    sds_post = sds_pre*spec.b if spec.b is not None else sds_pre

    row_sds = np.tile(sds_pre, [n_curves, 1])
    row_sds[k_star:, :] = sds_post

    if spec.dependence == 'iid':
        coefs = rng.standard_normal([n_curves, n_basis])*row_sds
        return FunctionalSeries(coefs, basis)

    # ==================================================================================================================
    # Functional autoregression
    z = rng.standard_normal([n_basis, n_basis])
    psi_pre = _ar_matrix(z, sds_pre, spec.kappa, spec.operator_norm)
    psi_post = _ar_matrix(z, sds_post, spec.kappa, spec.operator_norm)

    n_burn_in = int(math.ceil(n_curves/2))
    burn_in_innovs = rng.standard_normal([n_burn_in, n_basis])*sds_pre
    innovs = rng.standard_normal([n_curves, n_basis])*row_sds

    x = np.zeros(n_basis)
    for i in range(n_burn_in):
        x = np.matmul(psi_pre, x) + burn_in_innovs[i, :]

    coefs = np.zeros([n_curves, n_basis])
    for i in range(n_curves):
        psi = psi_pre if i < k_star else psi_post
        x = np.matmul(psi, x) + innovs[i, :]
        coefs[i, :] = x

    return FunctionalSeries(coefs, basis)
