""" Tools for computing covariance operators of functional series and their spectra.

Covariance operators are represented by their D*D coefficient matrices in the (orthonormal) basis of the series, so
the eigenvalues of an operator are the eigenvalues of its matrix and eigenfunctions are given by eigenvectors holding
basis coefficients.

Partial-sample operators follow the convention

    C_x = (1/n) * sum_{i=1}^{floor(nx)} (X_i - Xbar) (X_i - Xbar)^T,

with the full-sample mean Xbar and the full-sample size n in the normalization, for every x.  All supremum-type
quantities over x in [delta, 1] are evaluated on the grid x = k/n, k = ceil(n*delta), ..., n, since every partial-sample
statistic is a step function of floor(nx).
"""

import math
import warnings

import numpy as np
import pandas as pd
import scipy.linalg

from spectral_breaks.errors import ClippedEigenvalueWarning, DegenerateSpectrumError, InvalidArgumentError
from spectral_breaks.errors import SpectralGapWarning
from spectral_breaks.fda.basis import BasisSystem, FunctionalSeries

# Negative eigenvalues larger in magnitude than this are reported when clipped to 0
CLIP_WARN_TOL = 1e-8

# A spectral gap below this fraction of the leading eigenvalue is reported
GAP_REL_TOL = 1e-10

# Slack when comparing cumulative variance fractions to a TVE threshold
TVE_TOL = 1e-12


def _clip_eigenvalues(eig_vls: np.ndarray, clip_warn_tol: float = CLIP_WARN_TOL) -> np.ndarray:
    """ Sets negative (round-off) eigenvalues to 0, warning if any clipped value is not negligible. """
    min_vl = np.min(eig_vls) if eig_vls.size > 0 else 0.0
    if min_vl < -clip_warn_tol:
        warnings.warn(ClippedEigenvalueWarning('Clipped a negative eigenvalue of magnitude ' +
                                               '{:.3e}'.format(-min_vl) + ' to 0.'))
    return np.maximum(eig_vls, 0.0)


class CovarianceOperator:
    """ A covariance operator stored through its symmetric coefficient matrix. """

    def __init__(self, mat: np.ndarray, sample_fraction: float = 1.0):
        """ Creates a new CovarianceOperator object.

        Args:
            mat: The D*D coefficient matrix of the covariance kernel.  It is symmetrized on construction.

            sample_fraction: The fraction k/n of the sample the operator was computed from.
        """
        mat = np.asarray(mat, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise(InvalidArgumentError('mat must be a square matrix.'))

        mat = .5*(mat + mat.T)
        mat.flags.writeable = False
        self.mat = mat
        self.sample_fraction = sample_fraction

    @property
    def n_basis(self) -> int:
        return self.mat.shape[0]

    def trace(self) -> float:
        """ Returns the trace of the operator (the integral of the kernel along its diagonal). """
        return float(np.trace(self.mat))

    def eigenvalues(self) -> np.ndarray:
        """ Returns all D eigenvalues in non-increasing order, clipped at 0. """
        return _clip_eigenvalues(np.linalg.eigvalsh(self.mat)[::-1])

    def evaluate_kernel(self, t: np.ndarray, s: np.ndarray, basis: BasisSystem) -> np.ndarray:
        """ Evaluates the covariance kernel C(t, s) on a grid.

        Args:
            t: 1-d array of points in [0, 1].

            s: 1-d array of points in [0, 1].

            basis: The basis the coefficient matrix is expressed in.

        Returns:
            c: Array of shape [len(t), len(s)] with c[a, b] = C(t[a], s[b]).
        """
        return np.matmul(np.matmul(basis.evaluate(t), self.mat), basis.evaluate(s).T)


class EigenSystem:
    """ The leading d eigenvalues and eigenvectors of a covariance operator.

    Eigenvectors are stored as columns holding the basis coefficients of the eigenfunctions.  The sign of each
    eigenvector is fixed so its largest magnitude coordinate is positive.
    """

    def __init__(self, eigenvalues: np.ndarray, eigenvectors: np.ndarray):
        """ Creates a new EigenSystem object.

        Args:
            eigenvalues: Non-increasing, non-negative eigenvalues of length d.

            eigenvectors: Array of shape [D, d].  Column j is the unit-norm eigenvector for eigenvalues[j].
        """
        self.eigenvalues = np.asarray(eigenvalues, dtype=float)
        self.eigenvectors = np.asarray(eigenvectors, dtype=float)

    @property
    def n_components(self) -> int:
        return len(self.eigenvalues)

    def eigenfunctions(self, basis: BasisSystem, t: np.ndarray) -> np.ndarray:
        """ Evaluates the eigenfunctions on a grid.

        Returns:
            phi: Array of shape [d, len(t)].  Row j is the j^th eigenfunction.
        """
        return basis.reconstruct(self.eigenvectors.T, t)


class EigenProcess:
    """ Partial-sample eigenvalues lambda_j(k/n) for k = ceil(n*delta), ..., n. """

    def __init__(self, grid: np.ndarray, values: np.ndarray, delta: float, n_curves: int):
        """ Creates a new EigenProcess object.

        Args:
            grid: The integers k the process is evaluated at, increasing and ending at n_curves.

            values: Array of shape [len(grid), d].  values[g, j] is the (j+1)^th largest eigenvalue of C_{grid[g]/n}.

            delta: The trimming parameter the grid was built from.

            n_curves: The sample size n.
        """
        self.grid = np.asarray(grid, dtype=int)
        self.values = np.asarray(values, dtype=float)
        self.delta = delta
        self.n_curves = n_curves

    @property
    def n_components(self) -> int:
        return self.values.shape[1]

    @property
    def fractions(self) -> np.ndarray:
        """ The sample fractions k/n of the grid. """
        return self.grid/self.n_curves

    @property
    def full_sample(self) -> np.ndarray:
        """ The eigenvalues of the full-sample operator, i.e., the last row of values. """
        return self.values[-1, :]


class TraceProcess:
    """ The partial-sample trace T_n(k/n) for k = 1, ..., n. """

    def __init__(self, values: np.ndarray):
        """ Creates a new TraceProcess object.

        Args:
            values: Array of length n.  values[k-1] = T_n(k/n).
        """
        self.values = np.asarray(values, dtype=float)

    @property
    def n_curves(self) -> int:
        return len(self.values)

    @property
    def fractions(self) -> np.ndarray:
        return np.arange(1, self.n_curves + 1)/self.n_curves


def trim_grid(n_curves: int, delta: float) -> np.ndarray:
    """ Returns the grid k = ceil(n*delta), ..., n, where the first point is at least 1.

    Args:
        n_curves: The sample size n.

        delta: The trimming parameter in [0, 1).

    Returns:
        grid: The integer grid.

    Raises:
        InvalidArgumentError: If delta is outside [0, 1).
    """
    if not (0 <= delta < 1):
        raise(InvalidArgumentError('delta must be in [0, 1); got ' + str(delta) + '.'))
    # Round before taking the ceiling so that, e.g., 500*.1 is not pushed up by floating point error
    start = max(1, int(math.ceil(round(n_curves*delta, 9))))
    return np.arange(start, n_curves + 1)


def partial_covariance(series: FunctionalSeries, k: int) -> CovarianceOperator:
    """ Computes the partial-sample covariance operator C_{k/n}.

    The full-sample mean is subtracted from the series before computing the operator, so already centered series are
    left unchanged.

    Args:
        series: The functional series.

        k: The number of leading curves to include, in 1, ..., n.

    Returns:
        cov: The operator (1/n) * sum_{i=1}^k (X_i - Xbar)(X_i - Xbar)^T.

    Raises:
        InvalidArgumentError: If k is outside 1, ..., n.
    """
    n_curves = series.n_curves
    if int(k) != k or k < 1 or k > n_curves:
        raise(InvalidArgumentError('k must be an integer in 1, ..., ' + str(n_curves) + '; got ' + str(k) + '.'))
    k = int(k)

    x = series.coefs - series.mean()
    return CovarianceOperator(np.matmul(x[:k, :].T, x[:k, :])/n_curves, sample_fraction=k/n_curves)


def segment_covariance(series: FunctionalSeries, start: int, stop: int) -> CovarianceOperator:
    """ Computes the sample covariance operator of curves start, ..., stop-1 (0-based) around their own mean.

    Args:
        series: The functional series.

        start: The first curve of the segment (0-based).

        stop: One past the last curve of the segment.

    Returns:
        cov: The covariance operator, normalized by the segment length.
    """
    if start < 0 or stop > series.n_curves or stop - start < 1:
        raise(InvalidArgumentError('Invalid segment [' + str(start) + ', ' + str(stop) + ').'))
    x = series.coefs[start:stop, :]
    x = x - np.mean(x, axis=0)
    return CovarianceOperator(np.matmul(x.T, x)/(stop - start), sample_fraction=(stop - start)/series.n_curves)


def eigen_decompose(cov: CovarianceOperator, d: int) -> EigenSystem:
    """ Computes the leading d eigenpairs of a covariance operator.

    Args:
        cov: The covariance operator.

        d: The number of eigenpairs to return, in 1, ..., D.

    Returns:
        eig: The eigensystem.  Eigenvalues are non-increasing with round-off negatives clipped to 0 and each
        eigenvector has its largest magnitude coordinate positive (ties go to the first such coordinate).

    Raises:
        InvalidArgumentError: If d is outside 1, ..., D.
    """
    n_basis = cov.n_basis
    if int(d) != d or d < 1 or d > n_basis:
        raise(InvalidArgumentError('d must be an integer in 1, ..., ' + str(n_basis) + '; got ' + str(d) + '.'))
    d = int(d)

    eig_vls, eig_vecs = scipy.linalg.eigh(cov.mat)
    eig_vls = eig_vls[::-1][:d]
    eig_vecs = eig_vecs[:, ::-1][:, :d]

    eig_vls = _clip_eigenvalues(eig_vls)

    max_inds = np.argmax(np.abs(eig_vecs), axis=0)
    signs = np.sign(eig_vecs[max_inds, np.arange(d)])
    signs[signs == 0] = 1
    eig_vecs = eig_vecs*signs

    return EigenSystem(eig_vls, eig_vecs)


def eigenvalue_process(series: FunctionalSeries, d: int, delta: float) -> EigenProcess:
    """ Computes the leading d partial-sample eigenvalues on the grid k = ceil(n*delta), ..., n.

    Cumulative sums of outer products give all partial-sample operators at once, and their spectra are computed as one
    batched symmetric eigenvalue problem.

    Args:
        series: The functional series.

        d: The number of eigenvalues to track, in 1, ..., D.

        delta: The trimming parameter in (0, 1).

    Returns:
        process: The eigenvalue process.

    Raises:
        InvalidArgumentError: If d or delta are out of range.
    """
    n_curves, n_basis = series.coefs.shape
    if int(d) != d or d < 1 or d > n_basis:
        raise(InvalidArgumentError('d must be an integer in 1, ..., ' + str(n_basis) + '; got ' + str(d) + '.'))
    d = int(d)

    grid = trim_grid(n_curves, delta)

    x = series.coefs - series.mean()
    outer = np.einsum('ia,ib->iab', x, x)
    partial_covs = np.cumsum(outer, axis=0)[grid - 1]/n_curves

    eig_vls = np.linalg.eigvalsh(partial_covs)[:, ::-1][:, :d]
    eig_vls = _clip_eigenvalues(eig_vls)

    return EigenProcess(grid=grid, values=eig_vls, delta=delta, n_curves=n_curves)


def trace_process(series: FunctionalSeries) -> TraceProcess:
    """ Computes the partial-sample trace T_n(k/n) = (1/n) sum_{i <= k} ||X_i - Xbar||^2 for k = 1, ..., n.

    Args:
        series: The functional series.

    Returns:
        process: The trace process.
    """
    xi = series.centered().sq_norms()
    return TraceProcess(np.cumsum(xi)/series.n_curves)


def tve_dimension(eigenvalues: np.ndarray, v: float) -> int:
    """ Selects the number of components by the total variance explained criterion.

    Args:
        eigenvalues: All D eigenvalues in non-increasing order.

        v: The fraction of total variance to explain, in (0, 1].

    Returns:
        d: The smallest d with (lambda_1 + ... + lambda_d)/sum(eigenvalues) >= v.

    Raises:
        InvalidArgumentError: If v is out of range or eigenvalues are negative.

        DegenerateSpectrumError: If all eigenvalues are zero.
    """
    if not (0 < v <= 1):
        raise(InvalidArgumentError('v must be in (0, 1]; got ' + str(v) + '.'))

    eigenvalues = np.asarray(eigenvalues, dtype=float)
    if np.any(eigenvalues < -CLIP_WARN_TOL):
        raise(InvalidArgumentError('eigenvalues must be non-negative.'))
    eigenvalues = np.maximum(eigenvalues, 0)

    total = np.sum(eigenvalues)
    if total <= 0:
        raise(DegenerateSpectrumError('All eigenvalues are zero; the total variance explained is undefined.'))

    tve = np.cumsum(eigenvalues)/total
    return int(np.argmax(tve >= v - TVE_TOL)) + 1


def spectral_gap(eigenvalues: np.ndarray, d: int, rel_tol: float = GAP_REL_TOL) -> float:
    """ Returns lambda_d - lambda_{d+1}, warning when the gap is numerically zero.

    Args:
        eigenvalues: All eigenvalues in non-increasing order.  If d equals their number, lambda_{d+1} is taken as 0.

        d: The number of components being tested.

        rel_tol: A warning is issued if the gap is below rel_tol*lambda_1.

    Returns:
        gap: The spectral gap.
    """
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    next_vl = eigenvalues[d] if d < len(eigenvalues) else 0.0
    gap = float(eigenvalues[d - 1] - next_vl)
    if gap < rel_tol*eigenvalues[0]:
        warnings.warn(SpectralGapWarning('The gap between eigenvalues ' + str(d) + ' and ' + str(d + 1) + ' is ' +
                                         '{:.3e}'.format(gap) + '; the leading ' + str(d) + ' eigenvalues may not be '
                                         'distinct and the tests may be unreliable.'))
    return gap


def explained_variance_table(eig_vls_before: np.ndarray, eig_vls_after: np.ndarray, d: int) -> pd.DataFrame:
    """ Tabulates eigenvalues and explained variance before and after a break.

    Args:
        eig_vls_before: All D eigenvalues of the pre-break covariance operator, non-increasing.

        eig_vls_after: All D eigenvalues of the post-break covariance operator, non-increasing.

        d: The number of rows to tabulate.

    Returns:
        tbl: A table with one row per component j = 1, ..., d and columns j, lambda_before, lambda_after, pve_before,
        pve_after, tve_before, tve_after, tr_before, tr_after.  Here pve_j = lambda_j/tr_D, tr_j is the sum of the
        first j eigenvalues and tve_j = tr_j/tr_D, where tr_D is the sum of all D eigenvalues.
    """
    tbl = {'j': np.arange(1, d + 1)}
    for lbl, vls in [('before', np.asarray(eig_vls_before)), ('after', np.asarray(eig_vls_after))]:
        total = np.sum(vls)
        cum_vls = np.cumsum(vls)[:d]
        tbl['lambda_' + lbl] = vls[:d]
        tbl['pve_' + lbl] = vls[:d]/total if total > 0 else np.full(d, np.nan)
        tbl['tve_' + lbl] = cum_vls/total if total > 0 else np.full(d, np.nan)
        tbl['tr_' + lbl] = cum_vls

    cols = ['j', 'lambda_before', 'lambda_after', 'pve_before', 'pve_after', 'tve_before', 'tve_after',
            'tr_before', 'tr_after']
    return pd.DataFrame(tbl)[cols]


def variation_band(mean_coefs: np.ndarray, eig: EigenSystem, basis: BasisSystem, t: np.ndarray) -> np.ndarray:
    """ Computes the band mean +/- sum_j sqrt(lambda_j) phi_j describing variation around a mean curve.

    Args:
        mean_coefs: Basis coefficients of the mean curve.

        eig: The eigensystem whose components span the band.

        basis: The basis of the coefficients.

        t: Points to evaluate the band at.

    Returns:
        band: Array of shape [3, len(t)] holding the mean, lower and upper curves.
    """
    mn = basis.reconstruct(mean_coefs, t)
    spread = basis.reconstruct(np.matmul(eig.eigenvectors, np.sqrt(eig.eigenvalues)), t)
    return np.stack([mn, mn - spread, mn + spread])
