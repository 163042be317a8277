""" Tools for representing curves as coefficient vectors in an orthonormal basis on [0, 1].

Curves are stored through their coefficients in an orthonormal basis, so inner products and norms of curves reduce to
inner products and norms of coefficient vectors.  The basis currently supported is the Fourier basis, ordered as

    v_1(t) = 1, v_2(t) = sqrt(2)*sin(2*pi*t), v_3(t) = sqrt(2)*cos(2*pi*t), v_4(t) = sqrt(2)*sin(4*pi*t), ...

"""

from typing import Sequence

import numpy as np
import scipy.linalg

from spectral_breaks.errors import InvalidArgumentError, InvalidDataError, UnderdeterminedFitError

# Tolerance for the Gram matrix of a basis when checked by quadrature
GRAM_TOL = 1e-8

# Tolerance when checking Parseval's identity by quadrature
PARSEVAL_TOL = 1e-6

# Default number of quadrature points used when integrating over [0, 1]
N_QUAD_PTS = 10000

# Condition number above which the normal equations of a basis fit are considered singular
FIT_COND_LIMIT = 1e12

BASIS_KINDS = ('fourier',)


def quad_grid(n_pts: int = N_QUAD_PTS) -> np.ndarray:
    """ Returns midpoints of n_pts equal cells of [0, 1].

    The midpoint rule on this grid integrates trigonometric polynomials of degree less than n_pts exactly, so it is the
    natural quadrature for Fourier expansions.

    Args:
        n_pts: The number of quadrature points.

    Returns:
        t: The quadrature points.  Each carries weight 1/n_pts.
    """
    return (np.arange(n_pts) + .5)/n_pts


class BasisSystem:
    """ An orthonormal system of functions on [0, 1]. """

    def __init__(self, n_basis: int, kind: str = 'fourier'):
        """ Creates a new BasisSystem object.

        Args:
            n_basis: The number of basis functions, D.

            kind: The kind of basis.  Currently only 'fourier' is supported.

        Raises:
            InvalidArgumentError: If n_basis is less than 1 or kind is not recognized.
        """
        if int(n_basis) != n_basis or n_basis < 1:
            raise(InvalidArgumentError('n_basis must be a positive integer; got ' + str(n_basis) + '.'))
        if kind not in BASIS_KINDS:
            raise(InvalidArgumentError('Unrecognized basis kind: ' + str(kind)))

        self.n_basis = int(n_basis)
        self.kind = kind

    def __eq__(self, other) -> bool:
        return isinstance(other, BasisSystem) and (self.n_basis == other.n_basis) and (self.kind == other.kind)

    def __repr__(self) -> str:
        return 'BasisSystem(n_basis=' + str(self.n_basis) + ', kind=' + repr(self.kind) + ')'

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        """ Evaluates all basis functions at a set of points.

        Args:
            t: 1-d array of points in [0, 1].

        Returns:
            vls: Array of shape [len(t), n_basis].  vls[i, l] is the l^th basis function evaluated at t[i].
        """
        t = np.atleast_1d(np.asarray(t, dtype=float))

        vls = np.empty([len(t), self.n_basis])
        vls[:, 0] = 1.0
        for l_i in range(1, self.n_basis):
            freq = (l_i + 1)//2
            if l_i % 2 == 1:
                vls[:, l_i] = np.sqrt(2)*np.sin(2*np.pi*freq*t)
            else:
                vls[:, l_i] = np.sqrt(2)*np.cos(2*np.pi*freq*t)

        return vls

    def gram(self, n_quad_pts: int = N_QUAD_PTS) -> np.ndarray:
        """ Computes the Gram matrix of the basis by midpoint quadrature.

        Args:
            n_quad_pts: The number of quadrature points to use.

        Returns:
            g: The n_basis*n_basis matrix of integrals of products of basis functions.  This should be the identity.
        """
        vls = self.evaluate(quad_grid(n_quad_pts))
        return np.matmul(vls.T, vls)/n_quad_pts

    def reconstruct(self, coefs: np.ndarray, t: np.ndarray) -> np.ndarray:
        """ Evaluates curves given by their coefficients at a set of points.

        Args:
            coefs: Coefficients of shape [n_curves, n_basis] or a single coefficient vector of length n_basis.

            t: 1-d array of points in [0, 1].

        Returns:
            curves: Array of shape [n_curves, len(t)] (or [len(t)] for a single coefficient vector).
        """
        return np.matmul(coefs, self.evaluate(t).T)


def fourier_basis(n_basis: int) -> BasisSystem:
    """ Creates a Fourier basis with n_basis functions.

    Args:
        n_basis: The number of basis functions.

    Returns:
        basis: The basis system.

    Raises:
        InvalidArgumentError: If n_basis is less than 1.
    """
    return BasisSystem(n_basis=n_basis, kind='fourier')


class FunctionalSeries:
    """ A sequence of n curves, each stored as a coefficient vector in an orthonormal basis.

    Because the basis is orthonormal, the squared L^2 norm of a curve equals the squared Euclidean norm of its
    coefficients.  Coefficients are stored read-only; operations return new objects.
    """

    def __init__(self, coefs: np.ndarray, basis: BasisSystem):
        """ Creates a new FunctionalSeries object.

        Args:
            coefs: Array of shape [n_curves, n_basis].  Row i holds the coefficients of curve i.

            basis: The basis the coefficients are expressed in.

        Raises:
            InvalidDataError: If coefs is not 2-d, does not match the basis, has fewer than 2 rows or is not finite.
        """
        coefs = np.array(coefs, dtype=float)
        if coefs.ndim != 2:
            raise(InvalidDataError('coefs must be a 2-d array of shape [n_curves, n_basis].'))
        if coefs.shape[1] != basis.n_basis:
            raise(InvalidDataError('coefs has ' + str(coefs.shape[1]) + ' columns but the basis has ' +
                                   str(basis.n_basis) + ' functions.'))
        if coefs.shape[0] < 2:
            raise(InvalidDataError('A functional series needs at least 2 curves.'))
        if not np.all(np.isfinite(coefs)):
            raise(InvalidDataError('coefs contains non-finite values.'))

        coefs.flags.writeable = False
        self.coefs = coefs
        self.basis = basis

    @property
    def n_curves(self) -> int:
        return self.coefs.shape[0]

    @property
    def n_basis(self) -> int:
        return self.coefs.shape[1]

    def __len__(self) -> int:
        return self.n_curves

    def mean(self) -> np.ndarray:
        """ Returns the coefficients of the sample mean curve. """
        return np.mean(self.coefs, axis=0)

    def centered(self) -> 'FunctionalSeries':
        """ Returns the series with the full-sample mean curve subtracted. """
        return FunctionalSeries(self.coefs - self.mean(), self.basis)

    def sq_norms(self) -> np.ndarray:
        """ Returns the squared L^2 norm of each curve. """
        return np.sum(self.coefs**2, axis=1)

    def segment(self, start: int, stop: int) -> 'FunctionalSeries':
        """ Returns curves start, ..., stop-1 (0-based) as a new series. """
        return FunctionalSeries(self.coefs[start:stop, :], self.basis)

    def scaled(self, c: float) -> 'FunctionalSeries':
        """ Returns the series with every curve multiplied by c. """
        return FunctionalSeries(c*self.coefs, self.basis)


def smooth_to_basis(raw: np.ndarray, basis: BasisSystem, grid: np.ndarray = None,
                    cond_limit: float = FIT_COND_LIMIT) -> FunctionalSeries:
    """ Converts curves sampled on a regular grid to coefficients by least squares.

    Each row of raw is projected onto the span of the basis functions evaluated on the grid.  The fit solves the
    normal equations with a Cholesky factorization; no roughness penalty is applied.

    Args:
        raw: Array of shape [n_curves, n_grid_pts].  Row i holds curve i sampled on the grid.

        basis: The basis to project onto.

        grid: The increasing points the curves were sampled at.  Each point is taken as the midpoint of a cell one mean
        spacing wide and the cells are mapped affinely onto one period [0, 1), so the first and last points never
        coincide.  If None, the grid is quad_grid(n_grid_pts).

        cond_limit: The fit is declared underdetermined if the normal equations have a condition number above this.

    Returns:
        series: The fitted coefficients.

    Raises:
        InvalidDataError: If raw is not 2-d or contains non-finite values.

        UnderdeterminedFitError: If there are fewer grid points than basis functions or the design is rank deficient.
    """

    raw = np.asarray(raw, dtype=float)
    if raw.ndim != 2:
        raise(InvalidDataError('raw must be a 2-d array of shape [n_curves, n_grid_pts].'))
    if not np.all(np.isfinite(raw)):
        raise(InvalidDataError('raw contains missing or non-finite values.'))

    n_grid_pts = raw.shape[1]
    if n_grid_pts < basis.n_basis:
        raise(UnderdeterminedFitError('Cannot fit ' + str(basis.n_basis) + ' basis functions to curves sampled at ' +
                                      str(n_grid_pts) + ' points.'))

    if grid is None:
        t = quad_grid(n_grid_pts)
    else:
        grid = np.asarray(grid, dtype=float)
        if len(grid) != n_grid_pts:
            raise(InvalidDataError('grid has ' + str(len(grid)) + ' points but curves have ' + str(n_grid_pts) +
                                   ' samples.'))
        span = grid[-1] - grid[0]
        if span <= 0:
            raise(InvalidDataError('grid must be increasing.'))
        # Each point is the midpoint of a cell one mean spacing wide; the cells tile one period
        spacing = span/(n_grid_pts - 1)
        t = (grid - grid[0] + .5*spacing)/(n_grid_pts*spacing)

    design = basis.evaluate(t)
    normal_m = np.matmul(design.T, design)
    normal_m = .5*(normal_m + normal_m.T)

    if np.linalg.cond(normal_m) > cond_limit:
        raise(UnderdeterminedFitError('The basis evaluated on the grid is rank deficient; use more grid points or '
                                      'fewer basis functions.'))

    try:
        chol = scipy.linalg.cho_factor(normal_m)
    except np.linalg.LinAlgError:
        raise(UnderdeterminedFitError('The normal equations of the basis fit are not positive definite.'))

    coefs = scipy.linalg.cho_solve(chol, np.matmul(design.T, raw.T)).T

    return FunctionalSeries(coefs, basis)


def center_and_segment_demean(series: FunctionalSeries, breaks: Sequence[int] = None) -> FunctionalSeries:
    """ Subtracts segment-wise sample means from a functional series.

    The break indices split the curves into segments: a break at b means curves 1, ..., b (1-based) lie before the
    break and curve b+1 starts a new segment.  Within every segment the mean of the returned coefficients is zero.

    Args:
        series: The series to demean.

        breaks: Strictly increasing break indices in 1, ..., n-1.  If None or empty, the series is demeaned globally.

    Returns:
        demeaned: The demeaned series.

    Raises:
        InvalidArgumentError: If break indices are out of range or not strictly increasing.
    """

    if breaks is None:
        breaks = []
    breaks = [int(b) for b in breaks]

    n_curves = series.n_curves
    for b_i, b in enumerate(breaks):
        if b < 1 or b > n_curves - 1:
            raise(InvalidArgumentError('Break index ' + str(b) + ' is outside of 1, ..., ' + str(n_curves - 1) + '.'))
        if b_i > 0 and b <= breaks[b_i - 1]:
            raise(InvalidArgumentError('Break indices must be strictly increasing.'))

    edges = [0] + breaks + [n_curves]
    demeaned = np.array(series.coefs)
    for start, stop in zip(edges[:-1], edges[1:]):
        demeaned[start:stop, :] -= np.mean(series.coefs[start:stop, :], axis=0)

    return FunctionalSeries(demeaned, series.basis)
