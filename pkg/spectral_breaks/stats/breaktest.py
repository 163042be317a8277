""" Tests for structural breaks in the spectrum and trace of the covariance operator of a functional series.

Three statistics are provided:

    joint_test: J_n(delta) = max_k kappa_n(k/n)^T Sigma_d^{-1} kappa_n(k/n), for the leading d eigenvalues jointly,
    with the CUSUM vector kappa_n(x) = sqrt(n) (Lambda_d(x) - (floor(nx)/n) Lambda_d(1)).

    individual_test: I_{j,n}(delta) = max_k (sqrt(n)/sigma_j) |lambda_j(k/n) - (k/n) lambda_j(1)|, for one eigenvalue.

    trace_test: M_n = max_k (sqrt(n)/sigma_T) |T_n(k/n) - (k/n) T_n(1)|, for the trace.

Maxima run over k = ceil(n*delta), ..., n for the eigenvalue statistics and over k = 1, ..., n for the trace statistic.
The location of each maximum estimates the break date; ties go to the smallest k.  P-values and critical values come
from the same simulated reference sample of the limit distribution, so a test rejects exactly when its p-value is
below alpha.

Numerical warnings raised while computing a test are recorded in the diagnostics of its report and re-issued to the
caller.
"""

import math
import pathlib
import warnings
from typing import Dict, List, Tuple, Union

import numpy as np

from spectral_breaks.errors import DegenerateSpectrumError, InvalidArgumentError, SingularLRVError
from spectral_breaks.fda.basis import FunctionalSeries
from spectral_breaks.fda.spectrum import EigenProcess, eigen_decompose, eigenvalue_process, partial_covariance
from spectral_breaks.fda.spectrum import spectral_gap, trace_process
from spectral_breaks.stats.limit_dists import LimitDistSpec, critical_value, p_value, reference_sample
from spectral_breaks.stats.longrun import KernelSpec, invert_lrv, lrv_matrix, lrv_scalar, scores

# A covariance operator whose trace is below this fraction of the mean squared norm of the raw curves is degenerate
DEGENERATE_REL_TOL = 1e-20

# Long-run variances below this fraction of the squared scale of the tested quantity are treated as zero
LRV_REL_TOL = 1e-12

SQRT_N_NOTE = ('The statistic includes the sqrt(n) normalization of the partial-sample process required by the '
               'functional central limit theorem.')


class TestReport:
    """ The outcome of a structural break test. """

    # Keeps pytest from collecting this class
    __test__ = False

    def __init__(self, test: str, statistic: float, critical_value: float, p_value: float, alpha: float,
                 break_index: int, n_curves: int, d: int = None, delta: float = None, kernel: KernelSpec = None,
                 bandwidth: float = None, limit: LimitDistSpec = None, component: int = None,
                 diagnostics: List[str] = None):
        """ Creates a new TestReport object.

        Args:
            test: The name of the test: 'J', 'I<j>' or 'M'.

            statistic: The value of the test statistic.

            critical_value: The critical value at level alpha.

            p_value: The p-value.

            alpha: The level of the test.

            break_index: The estimated break date k (the last curve before the break).

            n_curves: The sample size n.

            d: The number of eigenvalues the test was computed with.

            delta: The trimming parameter.

            kernel: The lag-window kernel of the long-run variance estimate.

            bandwidth: The numeric bandwidth used.

            limit: The specification of the limit distribution the p-value was computed against.

            component: For individual tests, the index j of the tested eigenvalue.

            diagnostics: Messages of warnings raised while computing the test.
        """
        self.test = test
        self.statistic = float(statistic)
        self.critical_value = float(critical_value)
        self.p_value = float(p_value)
        self.alpha = alpha
        self.break_index = int(break_index)
        self.n_curves = n_curves
        self.d = d
        self.delta = delta
        self.kernel = kernel
        self.bandwidth = bandwidth
        self.limit = limit
        self.component = component
        self.diagnostics = list(diagnostics) if diagnostics is not None else []

    def __repr__(self) -> str:
        return ('TestReport(test=' + self.test + ', statistic=' + '{:.4f}'.format(self.statistic) +
                ', critical_value=' + '{:.4f}'.format(self.critical_value) + ', p_value=' +
                '{:.4f}'.format(self.p_value) + ', break_index=' + str(self.break_index) + ')')

    @property
    def break_fraction(self) -> float:
        return self.break_index/self.n_curves

    @property
    def reject(self) -> bool:
        """ True if the null hypothesis of no break is rejected at level alpha. """
        return self.statistic > self.critical_value

    def to_dict(self) -> dict:
        """ Returns a dictionary of the report holding only numbers, strings, lists and dictionaries. """
        return {'test': self.test, 'statistic': self.statistic, 'critical_value': self.critical_value,
                'p_value': self.p_value, 'alpha': self.alpha, 'reject': self.reject,
                'break_index': self.break_index, 'break_fraction': self.break_fraction, 'n_curves': self.n_curves,
                'd': self.d, 'delta': self.delta, 'component': self.component,
                'kernel': self.kernel.kind if self.kernel is not None else None,
                'bandwidth': self.bandwidth,
                'limit': self.limit.to_dict() if self.limit is not None else None,
                'diagnostics': list(self.diagnostics)}


def _format_warning(w: warnings.WarningMessage) -> str:
    return w.category.__name__ + ': ' + str(w.message)


def _capture_warnings(f, *args, **kwargs) -> Tuple[object, List[str]]:
    """ Calls f, returning its output and the messages of the warnings it raised, which are re-issued. """
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always')
        out = f(*args, **kwargs)
    for w in caught:
        warnings.warn(w.message, stacklevel=3)
    return out, [_format_warning(w) for w in caught]


def cusum_vector(process: EigenProcess) -> np.ndarray:
    """ Computes the CUSUM vectors kappa_n(k/n) = sqrt(n) (Lambda_d(k/n) - (k/n) Lambda_d(1)).

    Args:
        process: The partial-sample eigenvalue process.

    Returns:
        kappa: Array of shape [len(process.grid), d].  Row g is kappa_n at k = process.grid[g].  The last row (k = n)
        is exactly 0.
    """
    fracs = np.expand_dims(process.fractions, 1)
    return math.sqrt(process.n_curves)*(process.values - fracs*process.full_sample)


def check_not_degenerate(series: FunctionalSeries, scale: float = None, rel_tol: float = DEGENERATE_REL_TOL):
    """ Raises a DegenerateSpectrumError if the sample covariance operator of a series is numerically zero.

    Args:
        series: The functional series.

        scale: The mean squared norm the total variance is compared to.  Defaults to that of series; pass the value
        of the raw curves when series has already been demeaned.

        rel_tol: The series is degenerate if its total variance is at most rel_tol*scale.
    """
    if scale is None:
        scale = float(np.mean(series.sq_norms()))
    total_var = float(np.sum(series.centered().sq_norms()))/series.n_curves
    if total_var <= rel_tol*scale:
        raise(DegenerateSpectrumError('The sample covariance operator is zero: all curves are (numerically) '
                                      'identical, so there is no variation to test.'))


class _EigenIngredients:
    """ Quantities shared by the joint and individual tests. """

    def __init__(self, series: FunctionalSeries, d: int, delta: float, kernel: KernelSpec):
        check_not_degenerate(series)

        n_curves = series.n_curves
        cov_full = partial_covariance(series, n_curves)
        all_eig_vls = cov_full.eigenvalues()
        if int(d) != d or d < 1 or d > series.n_basis:
            raise(InvalidArgumentError('d must be an integer in 1, ..., ' + str(series.n_basis) + '; got ' +
                                       str(d) + '.'))
        spectral_gap(all_eig_vls, int(d))

        self.d = int(d)
        self.delta = delta
        self.kernel = kernel
        self.n_curves = n_curves
        self.bandwidth = kernel.resolve_bandwidth(n_curves)
        self.eig = eigen_decompose(cov_full, self.d)
        self.process = eigenvalue_process(series, self.d, delta)
        self.kappa = cusum_vector(self.process)
        self.sigma = lrv_matrix(scores(series, self.eig, cov_full), kernel)


def _check_delta(delta: float):
    if not (0 < delta < 1):
        raise(InvalidArgumentError('delta must be in (0, 1); got ' + str(delta) + '.'))


def _resolve_reference(limit: LimitDistSpec, reference: np.ndarray, cache_dir, n_processes: int) -> np.ndarray:
    if reference is None:
        reference, _ = reference_sample(limit, cache_dir=cache_dir, n_processes=n_processes)
    return reference


def _check_limit(limit: LimitDistSpec, family: str, n_dims: int = 1, delta: float = 0.0):
    if limit.family != family or limit.n_dims != n_dims or abs(limit.delta - delta) > 1e-12:
        raise(InvalidArgumentError('The limit distribution ' + repr(limit) + ' does not match the test (family ' +
                                   family + ', n_dims ' + str(n_dims) + ', delta ' + str(delta) + ').'))


def _joint_report(ing: _EigenIngredients, limit: LimitDistSpec, reference: np.ndarray, alpha: float,
                  diagnostics: List[str]) -> TestReport:
    sigma_inv = invert_lrv(ing.sigma)
    q = np.einsum('ga,ab,gb->g', ing.kappa, sigma_inv, ing.kappa)
    g_max = int(np.argmax(q))
    stat = float(q[g_max])
    return TestReport(test='J', statistic=stat, critical_value=critical_value(reference, alpha),
                      p_value=p_value(stat, reference), alpha=alpha, break_index=ing.process.grid[g_max],
                      n_curves=ing.n_curves, d=ing.d, delta=ing.delta, kernel=ing.kernel, bandwidth=ing.bandwidth,
                      limit=limit, diagnostics=diagnostics)


def _individual_report(ing: _EigenIngredients, j: int, limit: LimitDistSpec, reference: np.ndarray, alpha: float,
                       diagnostics: List[str]) -> TestReport:
    sigma_sq = float(ing.sigma[j - 1, j - 1])
    lambda_1 = float(ing.process.full_sample[0])
    if sigma_sq <= LRV_REL_TOL*lambda_1**2:
        raise(SingularLRVError('The long-run variance of the scores of eigenvalue ' + str(j) + ' is ' +
                               '{:.3e}'.format(sigma_sq) + ', which is numerically zero.', min_eig=sigma_sq))

    dev = np.abs(ing.kappa[:, j - 1])/math.sqrt(sigma_sq)
    g_max = int(np.argmax(dev))
    stat = float(dev[g_max])
    return TestReport(test='I' + str(j), statistic=stat, critical_value=critical_value(reference, alpha),
                      p_value=p_value(stat, reference), alpha=alpha, break_index=ing.process.grid[g_max],
                      n_curves=ing.n_curves, d=ing.d, delta=ing.delta, kernel=ing.kernel, bandwidth=ing.bandwidth,
                      limit=limit, component=j, diagnostics=diagnostics + [SQRT_N_NOTE])


def _trace_report(series: FunctionalSeries, kernel: KernelSpec, limit: LimitDistSpec, reference: np.ndarray,
                  alpha: float, diagnostics: List[str]) -> TestReport:
    check_not_degenerate(series)

    n_curves = series.n_curves
    trace_vls = trace_process(series).values
    sigma_sq = lrv_scalar(series.centered().sq_norms(), kernel)
    if sigma_sq <= LRV_REL_TOL*trace_vls[-1]**2:
        raise(SingularLRVError('The long-run variance of the squared norms of the curves is ' +
                               '{:.3e}'.format(sigma_sq) + ', which is numerically zero.', min_eig=sigma_sq))

    fracs = np.arange(1, n_curves + 1)/n_curves
    dev = math.sqrt(n_curves/sigma_sq)*np.abs(trace_vls - fracs*trace_vls[-1])
    k_max = int(np.argmax(dev))
    stat = float(dev[k_max])
    return TestReport(test='M', statistic=stat, critical_value=critical_value(reference, alpha),
                      p_value=p_value(stat, reference), alpha=alpha, break_index=k_max + 1, n_curves=n_curves,
                      kernel=kernel, bandwidth=kernel.resolve_bandwidth(n_curves), limit=limit,
                      diagnostics=diagnostics + [SQRT_N_NOTE])


def joint_test(series: FunctionalSeries, d: int, delta: float = .1, kernel: KernelSpec = None,
               limit: LimitDistSpec = None, alpha: float = .05, reference: np.ndarray = None,
               cache_dir: Union[str, pathlib.Path] = None, n_processes: int = 1) -> TestReport:
    """ Tests for a break in the leading d eigenvalues jointly.

    Args:
        series: The functional series.

        d: The number of eigenvalues to test.

        delta: The trimming parameter in (0, 1).

        kernel: The lag-window kernel for the long-run covariance of the scores.  Defaults to Bartlett with automatic
        bandwidth.

        limit: The specification of the J(d, delta) limit distribution.  Defaults to LimitDistSpec('J', d, delta).

        alpha: The level of the test.

        reference: A sorted sample simulated according to limit.  If None, it is simulated (or loaded from cache_dir).

        cache_dir: Folder of the reference sample cache.  If None, no cache is used.

        n_processes: The number of processes to simulate the reference sample with.

    Returns:
        report: The test report.  The break index is the k maximizing the quadratic form.

    Raises:
        DegenerateSpectrumError: If the sample covariance operator is zero.

        SingularLRVError: If the long-run covariance of the scores cannot be inverted.
    """
    _check_delta(delta)
    kernel = kernel if kernel is not None else KernelSpec()
    limit = limit if limit is not None else LimitDistSpec('J', n_dims=d, delta=delta)
    _check_limit(limit, 'J', n_dims=d, delta=delta)
    reference = _resolve_reference(limit, reference, cache_dir, n_processes)

    def _compute():
        return _joint_report(_EigenIngredients(series, d, delta, kernel), limit, reference, alpha, [])

    report, diagnostics = _capture_warnings(_compute)
    report.diagnostics = diagnostics + report.diagnostics
    return report


def individual_test(series: FunctionalSeries, j: int, d: int = None, delta: float = .1, kernel: KernelSpec = None,
                    limit: LimitDistSpec = None, alpha: float = .05, reference: np.ndarray = None,
                    cache_dir: Union[str, pathlib.Path] = None, n_processes: int = 1) -> TestReport:
    """ Tests for a break in the j^th eigenvalue.

    Args:
        series: The functional series.

        j: The (1-based) index of the eigenvalue to test, in 1, ..., d.

        d: The number of leading eigenvalues the analysis is based on.  Defaults to j.

        delta: The trimming parameter in (0, 1).

        kernel: The lag-window kernel.  Defaults to Bartlett with automatic bandwidth.

        limit: The specification of the I(delta) limit distribution.  Defaults to LimitDistSpec('I', delta=delta).

        alpha: The level of the test.

        reference: A sorted sample simulated according to limit.  If None, it is simulated (or loaded from cache_dir).

        cache_dir: Folder of the reference sample cache.

        n_processes: The number of processes to simulate the reference sample with.

    Returns:
        report: The test report.

    Raises:
        InvalidArgumentError: If j is not in 1, ..., d.

        DegenerateSpectrumError: If the sample covariance operator is zero.

        SingularLRVError: If the long-run variance of the j^th scores is numerically zero.
    """
    d = j if d is None else d
    if int(j) != j or j < 1 or j > d:
        raise(InvalidArgumentError('j must be an integer in 1, ..., d = ' + str(d) + '; got ' + str(j) + '.'))
    _check_delta(delta)
    kernel = kernel if kernel is not None else KernelSpec()
    limit = limit if limit is not None else LimitDistSpec('I', delta=delta)
    _check_limit(limit, 'I', delta=delta)
    reference = _resolve_reference(limit, reference, cache_dir, n_processes)

    def _compute():
        return _individual_report(_EigenIngredients(series, d, delta, kernel), int(j), limit, reference, alpha, [])

    report, diagnostics = _capture_warnings(_compute)
    report.diagnostics = diagnostics + report.diagnostics
    return report


def trace_test(series: FunctionalSeries, kernel: KernelSpec = None, limit: LimitDistSpec = None, alpha: float = .05,
               reference: np.ndarray = None, cache_dir: Union[str, pathlib.Path] = None,
               n_processes: int = 1) -> TestReport:
    """ Tests for a break in the trace of the covariance operator.

    The supremum runs over the whole unit interval; no trimming is applied.

    Args:
        series: The functional series.

        kernel: The lag-window kernel for the long-run variance of the squared norms.

        limit: The specification of the M limit distribution.  Defaults to LimitDistSpec('M').

        alpha: The level of the test.

        reference: A sorted sample simulated according to limit.

        cache_dir: Folder of the reference sample cache.

        n_processes: The number of processes to simulate the reference sample with.

    Returns:
        report: The test report.

    Raises:
        DegenerateSpectrumError: If the sample covariance operator is zero.

        SingularLRVError: If the long-run variance of the squared norms is numerically zero.
    """
    kernel = kernel if kernel is not None else KernelSpec()
    limit = limit if limit is not None else LimitDistSpec('M')
    _check_limit(limit, 'M')
    reference = _resolve_reference(limit, reference, cache_dir, n_processes)

    report, diagnostics = _capture_warnings(_trace_report, series, kernel, limit, reference, alpha, [])
    report.diagnostics = diagnostics + report.diagnostics
    return report


def reference_samples(d: int, delta: float, n_grid_pts: int = 1000, n_reps: int = 10000, seed: int = 0,
                      continuity_correction: bool = False, cache_dir: Union[str, pathlib.Path] = None,
                      n_processes: int = 1) -> Dict[str, Tuple[LimitDistSpec, np.ndarray]]:
    """ Simulates (or loads) the reference samples of the J(d, delta), I(delta) and M limit distributions.

    Returns:
        refs: Dictionary with keys 'J', 'I' and 'M'.  Each value is a tuple (spec, sorted sample).
    """
    refs = dict()
    for family in ('J', 'I', 'M'):
        spec = LimitDistSpec(family, n_dims=d, delta=delta, n_grid_pts=n_grid_pts, n_reps=n_reps, seed=seed,
                             continuity_correction=continuity_correction)
        refs[family] = (spec, reference_sample(spec, cache_dir=cache_dir, n_processes=n_processes)[0])
    return refs


def spectral_tests(series: FunctionalSeries, d: int, delta: float = .1, kernel: KernelSpec = None,
                   alpha: float = .05, references: Dict[str, Tuple[LimitDistSpec, np.ndarray]] = None,
                   n_individual: int = None, raise_errors: bool = True, **ref_kwargs) -> Dict[str, object]:
    """ Runs the joint test, the individual tests and the trace test from one set of shared computations.

    Args:
        series: The functional series.

        d: The number of eigenvalues for the joint test.

        delta: The trimming parameter in (0, 1).

        kernel: The lag-window kernel.  Defaults to Bartlett with automatic bandwidth.

        alpha: The level of the tests.

        references: Reference samples as returned by reference_samples.  If None, they are produced by calling
        reference_samples with d, delta and ref_kwargs.

        n_individual: Individual tests are run for j = 1, ..., n_individual.  Defaults to d.  Must not exceed d.

        raise_errors: If False, a test which fails with a SingularLRVError or DegenerateSpectrumError is reported by
        storing the exception in place of its report instead of raising it.

        ref_kwargs: Extra keyword arguments for reference_samples.

    Returns:
        reports: Dictionary with keys 'J', 'I1', ..., 'I<n_individual>' and 'M' holding TestReport objects (or
        exceptions, see raise_errors).
    """
    _check_delta(delta)
    kernel = kernel if kernel is not None else KernelSpec()
    n_individual = d if n_individual is None else n_individual
    if n_individual > d:
        raise(InvalidArgumentError('n_individual (' + str(n_individual) + ') must not exceed d (' + str(d) + ').'))
    if references is None:
        references = reference_samples(d, delta, **ref_kwargs)
    for family, n_dims, fam_delta in [('J', d, delta), ('I', 1, delta), ('M', 1, 0.0)]:
        _check_limit(references[family][0], family, n_dims=n_dims, delta=fam_delta)

    failures = (SingularLRVError, DegenerateSpectrumError)
    test_names = ['J'] + ['I' + str(j) for j in range(1, n_individual + 1)]

    reports = dict()
    try:
        ing, shared_diags = _capture_warnings(_EigenIngredients, series, d, delta, kernel)
    except failures as e:
        if raise_errors:
            raise
        ing = None
        reports.update({nm: e for nm in test_names})

    if ing is not None:
        for nm in test_names:
            try:
                if nm == 'J':
                    reports[nm], diags = _capture_warnings(_joint_report, ing, references['J'][0],
                                                           references['J'][1], alpha, [])
                else:
                    reports[nm], diags = _capture_warnings(_individual_report, ing, int(nm[1:]),
                                                           references['I'][0], references['I'][1], alpha, [])
                reports[nm].diagnostics = shared_diags + diags + reports[nm].diagnostics
            except failures as e:
                if raise_errors:
                    raise
                reports[nm] = e

    try:
        reports['M'], diags = _capture_warnings(_trace_report, series, kernel, references['M'][0],
                                                references['M'][1], alpha, [])
        reports['M'].diagnostics = diags + reports['M'].diagnostics
    except failures as e:
        if raise_errors:
            raise
        reports['M'] = e

    return reports
