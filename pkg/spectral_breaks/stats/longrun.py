""" Tools for estimating long-run covariance matrices with kernel lag-window estimators.

For a stationary vector sequence Theta_1, ..., Theta_n the long-run covariance is estimated by

    Sigma = sum_l w(l/h) Gamma_l,   Gamma_l = (1/n) sum_{i in I_l} (Theta_i - Theta_bar)(Theta_{i+l} - Theta_bar)^T,

where I_l = {1, ..., n-l} for l >= 0 and Gamma_{-l} = Gamma_l^T.  The 1/n normalization is used for every lag.
"""

import math
import warnings
from typing import Union

import numpy as np

from spectral_breaks.errors import InvalidArgumentError, LRVFloorWarning, SingularLRVError
from spectral_breaks.fda.basis import FunctionalSeries
from spectral_breaks.fda.spectrum import CovarianceOperator, EigenSystem

KERNEL_KINDS = ('bartlett', 'parzen', 'flattop')

# Estimates with condition numbers above this are treated as singular
COND_LIMIT = 1e12

# Tolerance, relative to the trace, for eigenvalues passed to scores
EIG_MATCH_RTOL = 1e-8


class KernelSpec:
    """ A lag-window weight function together with its bandwidth.

    The supported weight functions all have support [-1, 1], w(0) = 1, are symmetric and bounded by 1:

        bartlett: w(u) = 1 - |u|

        parzen: w(u) = 1 - 6u^2 + 6|u|^3 for |u| <= 1/2 and 2(1 - |u|)^3 for 1/2 < |u| <= 1

        flattop: w(u) = 1 for |u| <= 1/2 and 2(1 - |u|) for 1/2 < |u| <= 1

    The flat-top (trapezoid) window has 1 - w(u) = 0 near 0, so it reduces bias but can produce indefinite estimates.
    """

    def __init__(self, kind: str = 'bartlett', bandwidth: Union[float, str] = 'auto'):
        """ Creates a new KernelSpec object.

        Args:
            kind: One of 'bartlett', 'parzen' or 'flattop'.

            bandwidth: A positive bandwidth h or 'auto', which selects h = floor(n^(1/3)) for a sample of size n.

        Raises:
            InvalidArgumentError: If kind is unknown or bandwidth is not positive.
        """
        kind = kind.lower()
        if kind not in KERNEL_KINDS:
            raise(InvalidArgumentError('Unrecognized kernel: ' + str(kind) + '.  Must be one of ' +
                                       ', '.join(KERNEL_KINDS) + '.'))
        if bandwidth != 'auto':
            bandwidth = float(bandwidth)
            if not bandwidth > 0:
                raise(InvalidArgumentError('bandwidth must be positive; got ' + str(bandwidth) + '.'))

        self.kind = kind
        self.bandwidth = bandwidth

    def __repr__(self) -> str:
        return 'KernelSpec(kind=' + repr(self.kind) + ', bandwidth=' + repr(self.bandwidth) + ')'

    def to_dict(self) -> dict:
        return {'kind': self.kind, 'bandwidth': self.bandwidth}

    @classmethod
    def from_dict(cls, d: dict):
        return cls(**d)

    def weight(self, u: np.ndarray) -> np.ndarray:
        """ Evaluates the weight function.

        Args:
            u: Points to evaluate the weight function at.

        Returns:
            w: The weights, of the same shape as u.
        """
        a = np.abs(np.asarray(u, dtype=float))
        if self.kind == 'bartlett':
            w = 1 - a
        elif self.kind == 'parzen':
            w = np.where(a <= .5, 1 - 6*a**2 + 6*a**3, 2*(1 - a)**3)
        else:
            w = np.where(a <= .5, 1.0, 2*(1 - a))
        return np.where(a <= 1, w, 0.0)

    def resolve_bandwidth(self, n_smps: int) -> float:
        """ Returns the numeric bandwidth for a sample of size n_smps. """
        if self.bandwidth == 'auto':
            return float(max(1, math.floor(n_smps**(1/3) + 1e-9)))
        return self.bandwidth


class ScoreMatrix:
    """ Estimated scores theta_{i,j} = <X_i - Xbar, phi_j>^2 - lambda_j of a functional series. """

    def __init__(self, scores: np.ndarray):
        """ Creates a new ScoreMatrix object.

        Args:
            scores: Array of shape [n_curves, d].
        """
        scores = np.asarray(scores, dtype=float)
        if scores.ndim == 1:
            scores = np.expand_dims(scores, 1)
        self.scores = scores
        self.col_means = np.mean(scores, axis=0)

    @property
    def n_curves(self) -> int:
        return self.scores.shape[0]

    @property
    def n_components(self) -> int:
        return self.scores.shape[1]


def scores(series: FunctionalSeries, eig: EigenSystem, cov_full: CovarianceOperator) -> ScoreMatrix:
    """ Computes the scores theta_{i,j} = <(X_i - Xbar) x (X_i - Xbar) - C_1, phi_j x phi_j>.

    Since phi_j is a unit eigenfunction of C_1 with eigenvalue lambda_j, this inner product equals
    <X_i - Xbar, phi_j>^2 - lambda_j, which is what is computed.

    Args:
        series: The functional series.

        eig: Leading eigenpairs of cov_full.

        cov_full: The full-sample covariance operator of series.  Only used to check that eig holds its eigenpairs.

    Returns:
        scores: The n*d score matrix.

    Raises:
        InvalidArgumentError: If the dimensions of series, eig and cov_full do not match, if cov_full is a partial
        covariance or if eig does not hold eigenpairs of cov_full.
    """
    if eig.eigenvectors.shape[0] != series.n_basis or cov_full.n_basis != series.n_basis:
        raise(InvalidArgumentError('Dimension mismatch: series has ' + str(series.n_basis) + ' basis functions, '
                                   'eigenvectors have ' + str(eig.eigenvectors.shape[0]) + ' and the covariance '
                                   'operator has ' + str(cov_full.n_basis) + '.'))
    if cov_full.sample_fraction != 1:
        raise(InvalidArgumentError('cov_full must be the full-sample covariance operator; got sample fraction ' +
                                   str(cov_full.sample_fraction) + '.'))

    # Rayleigh quotients of the eigenvectors must reproduce the (clipped) eigenvalues
    rayleigh = np.sum(eig.eigenvectors*np.matmul(cov_full.mat, eig.eigenvectors), axis=0)
    tol = EIG_MATCH_RTOL*max(float(np.trace(cov_full.mat)), np.finfo(float).tiny)
    if np.any(np.abs(rayleigh - eig.eigenvalues) > tol):
        raise(InvalidArgumentError('eig does not hold eigenpairs of cov_full.'))

    proj = np.matmul(series.coefs - series.mean(), eig.eigenvectors)
    return ScoreMatrix(proj**2 - eig.eigenvalues)


def _lag_window_sum(x: np.ndarray, kernel: KernelSpec) -> np.ndarray:
    """ Computes sum_l w(l/h) Gamma_l for the rows of x, an array of shape [n_smps, n_vars]. """

    n_smps = x.shape[0]
    h = kernel.resolve_bandwidth(n_smps)

    x_c = x - np.mean(x, axis=0)
    sigma = np.matmul(x_c.T, x_c)/n_smps

    # Every supported weight function vanishes for |l| > h
    max_lag = min(n_smps - 1, int(math.floor(h)))
    for l_i in range(1, max_lag + 1):
        w = float(kernel.weight(l_i/h))
        if w == 0:
            continue
        gamma = np.matmul(x_c[:-l_i, :].T, x_c[l_i:, :])/n_smps
        sigma = sigma + w*(gamma + gamma.T)

    return .5*(sigma + sigma.T)


def lrv_matrix(scores: ScoreMatrix, kernel: KernelSpec = None) -> np.ndarray:
    """ Estimates the long-run covariance matrix of score vectors.

    Args:
        scores: The score matrix.

        kernel: The lag-window kernel.  If None, a Bartlett kernel with automatic bandwidth is used.

    Returns:
        sigma: The symmetric d*d estimate.

    Raises:
        InvalidArgumentError: If there are fewer than 4 scores or the bandwidth is not smaller than n.
    """
    if kernel is None:
        kernel = KernelSpec()
    _check_lrv_args(scores.n_curves, kernel)
    return _lag_window_sum(scores.scores, kernel)


def lrv_scalar(xi: np.ndarray, kernel: KernelSpec = None) -> float:
    """ Estimates the long-run variance of a scalar sequence.

    Negative estimates, which are possible with kernels that are not positive definite, are floored at machine
    epsilon and a LRVFloorWarning is issued.

    Args:
        xi: The sequence of length n.

        kernel: The lag-window kernel.  If None, a Bartlett kernel with automatic bandwidth is used.

    Returns:
        sigma_sq: The estimated long-run variance.
    """
    if kernel is None:
        kernel = KernelSpec()
    xi = np.asarray(xi, dtype=float)
    _check_lrv_args(len(xi), kernel)

    sigma_sq = float(_lag_window_sum(np.expand_dims(xi, 1), kernel)[0, 0])
    if sigma_sq < 0:
        warnings.warn(LRVFloorWarning('The long-run variance estimate ' + '{:.3e}'.format(sigma_sq) +
                                      ' is negative and was floored at machine epsilon.'))
        sigma_sq = float(np.finfo(float).eps)
    return sigma_sq


def _check_lrv_args(n_smps: int, kernel: KernelSpec):
    if n_smps < 4:
        raise(InvalidArgumentError('At least 4 observations are needed to estimate a long-run variance.'))
    h = kernel.resolve_bandwidth(n_smps)
    if h >= n_smps:
        raise(InvalidArgumentError('The bandwidth (' + str(h) + ') must be smaller than the sample size (' +
                                   str(n_smps) + ').'))


def invert_lrv(sigma: np.ndarray, cond_limit: float = COND_LIMIT) -> np.ndarray:
    """ Inverts a symmetric long-run covariance estimate through its eigendecomposition.

    Args:
        sigma: The symmetric d*d estimate.

        cond_limit: The estimate is declared singular if its condition number exceeds this.

    Returns:
        sigma_inv: The inverse.

    Raises:
        SingularLRVError: If the estimate is not positive definite or is too poorly conditioned.
    """
    sigma = np.asarray(sigma, dtype=float)
    sigma = .5*(sigma + sigma.T)

    eig_vls, eig_vecs = np.linalg.eigh(sigma)
    min_vl = float(eig_vls[0])
    max_vl = float(eig_vls[-1])

    if min_vl <= 0 or max_vl/min_vl > cond_limit:
        raise(SingularLRVError('The long-run covariance estimate is singular or nearly so (smallest eigenvalue ' +
                               '{:.3e}'.format(min_vl) + ', largest ' + '{:.3e}'.format(max_vl) + ').  '
                               'Try testing fewer eigenvalues (reduce d).', min_eig=min_vl))

    return np.matmul(eig_vecs/eig_vls, eig_vecs.T)
