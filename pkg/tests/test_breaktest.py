""" Tests for the joint, individual and trace break tests. """

import numpy as np
import pytest
import scipy.stats

from spectral_breaks.errors import DegenerateSpectrumError, InvalidArgumentError
from spectral_breaks.fda.basis import FunctionalSeries, fourier_basis
from spectral_breaks.fda.spectrum import eigenvalue_process
from spectral_breaks.sim.experiments import run_experiment
from spectral_breaks.sim.generation import DgpSpec, gen_series, setting_multipliers
from spectral_breaks.stats.breaktest import SQRT_N_NOTE, TestReport, cusum_vector, individual_test, joint_test
from spectral_breaks.stats.breaktest import reference_samples, spectral_tests, trace_test
from spectral_breaks.stats.limit_dists import LimitDistSpec


def _joint(series, refs, **kwargs):
    return joint_test(series, 3, delta=.1, limit=refs['J'][0], reference=refs['J'][1], **kwargs)


def _break_series(n_curves: int = 400, b: float = 5.0, seed: int = 1) -> FunctionalSeries:
    spec = DgpSpec(n_curves, tau=.5, b=setting_multipliers(1, b, 21), seed=seed)
    return gen_series(spec)


class TestCusum:

    def test_matches_definition(self, random_series):
        process = eigenvalue_process(random_series, 3, .1)
        kappa = cusum_vector(process)
        k = process.grid[10]
        expected = np.sqrt(60)*(process.values[10] - (k/60)*process.full_sample)
        assert np.allclose(kappa[10], expected)

    def test_vanishes_at_full_sample(self, random_series):
        kappa = cusum_vector(eigenvalue_process(random_series, 4, .2))
        assert np.all(kappa[-1] == 0)

    def test_two_curve_example(self, two_curve_series):
        # lambda(1/2) = 1/2 and lambda(1) = 1, so the CUSUM is 0 at both grid points
        assert np.allclose(cusum_vector(eigenvalue_process(two_curve_series, 1, .5)), 0.0)


class TestReportObject:

    def test_reject_matches_p_value(self, random_series, small_references):
        reports = spectral_tests(random_series, 3, references=small_references)
        for r in reports.values():
            assert r.reject == (r.p_value < r.alpha)
            assert 0 <= r.p_value <= 1

    def test_to_dict(self, random_series, small_references):
        d = _joint(random_series, small_references).to_dict()
        assert d['test'] == 'J' and d['d'] == 3 and d['kernel'] == 'bartlett'
        assert d['limit']['family'] == 'J'
        assert d['break_fraction'] == d['break_index']/60

    def test_break_fraction(self):
        r = TestReport('M', 1.0, 1.3, .2, .05, break_index=30, n_curves=120)
        assert r.break_fraction == .25
        assert not r.reject


class TestInvariances:

    @pytest.mark.parametrize('c', [.1, 3.0, 100.0])
    def test_scale_invariance(self, random_series, small_references, c):
        base = spectral_tests(random_series, 3, references=small_references)
        scaled = spectral_tests(random_series.scaled(c), 3, references=small_references)
        for nm in base.keys():
            assert scaled[nm].statistic == pytest.approx(base[nm].statistic, rel=1e-8)
            assert scaled[nm].break_index == base[nm].break_index

    def test_shift_invariance(self, random_series, small_references):
        shifted = FunctionalSeries(random_series.coefs + np.array([5.0, -2.0, 0.0, 1.0, 3.0]), random_series.basis)
        base = spectral_tests(random_series, 3, references=small_references)
        moved = spectral_tests(shifted, 3, references=small_references)
        for nm in base.keys():
            assert moved[nm].statistic == pytest.approx(base[nm].statistic, rel=1e-8)
            assert moved[nm].break_index == base[nm].break_index


class TestJointAndIndividual:

    def test_one_dimensional_joint_is_squared_individual(self, random_series):
        limit = LimitDistSpec('J', n_dims=1, delta=.1, n_grid_pts=100, n_reps=1000)
        joint = joint_test(random_series, 1, delta=.1, limit=limit)
        ind = individual_test(random_series, 1, delta=.1,
                              limit=LimitDistSpec('I', delta=.1, n_grid_pts=100, n_reps=1000))
        assert joint.statistic == pytest.approx(ind.statistic**2, rel=1e-10)
        assert joint.break_index == ind.break_index

    def test_shared_computations_match_single_tests(self, random_series, small_references):
        reports = spectral_tests(random_series, 3, references=small_references)
        assert set(reports.keys()) == {'J', 'I1', 'I2', 'I3', 'M'}
        assert reports['J'].statistic == _joint(random_series, small_references).statistic
        ind = individual_test(random_series, 2, d=3, limit=small_references['I'][0],
                              reference=small_references['I'][1])
        assert reports['I2'].statistic == ind.statistic
        assert reports['I2'].component == 2
        trace = trace_test(random_series, limit=small_references['M'][0], reference=small_references['M'][1])
        assert reports['M'].statistic == trace.statistic

    def test_break_index_respects_trimming(self, random_series, small_references):
        reports = spectral_tests(random_series, 3, references=small_references)
        for nm in ['J', 'I1', 'I2', 'I3']:
            assert 6 <= reports[nm].break_index <= 60
        assert 1 <= reports['M'].break_index <= 60

    def test_diagnostics_note_normalization(self, random_series, small_references):
        reports = spectral_tests(random_series, 3, references=small_references)
        assert SQRT_N_NOTE in reports['I1'].diagnostics
        assert SQRT_N_NOTE in reports['M'].diagnostics

    def test_n_individual(self, random_series, small_references):
        reports = spectral_tests(random_series, 3, references=small_references, n_individual=1)
        assert set(reports.keys()) == {'J', 'I1', 'M'}
        with pytest.raises(InvalidArgumentError):
            spectral_tests(random_series, 3, references=small_references, n_individual=4)

    def test_detects_large_break(self, small_references):
        reports = spectral_tests(_break_series(), 3, references=small_references)
        assert reports['J'].reject and reports['I1'].reject and reports['M'].reject
        assert abs(reports['J'].break_index - 200) <= 40
        assert abs(reports['M'].break_index - 200) <= 40


class TestInvalidInput:

    def test_identical_curves_are_degenerate(self, small_references):
        row = np.random.default_rng(0).standard_normal(5)
        series = FunctionalSeries(np.tile(row, [50, 1]), fourier_basis(5))
        with pytest.raises(DegenerateSpectrumError):
            _joint(series, small_references)
        with pytest.raises(DegenerateSpectrumError):
            trace_test(series, limit=small_references['M'][0], reference=small_references['M'][1])

    def test_failures_can_be_reported(self, small_references):
        series = FunctionalSeries(np.ones([50, 5]), fourier_basis(5))
        reports = spectral_tests(series, 3, references=small_references, raise_errors=False)
        assert set(reports.keys()) == {'J', 'I1', 'I2', 'I3', 'M'}
        assert all(isinstance(r, DegenerateSpectrumError) for r in reports.values())
        with pytest.raises(DegenerateSpectrumError):
            spectral_tests(series, 3, references=small_references)

    def test_mismatched_limit(self, random_series, small_references):
        with pytest.raises(InvalidArgumentError):
            joint_test(random_series, 2, delta=.1, limit=small_references['J'][0], reference=small_references['J'][1])
        with pytest.raises(InvalidArgumentError):
            spectral_tests(random_series, 3, delta=.2, references=small_references)

    @pytest.mark.parametrize('delta', [0.0, 1.0])
    def test_invalid_delta(self, random_series, delta):
        with pytest.raises(InvalidArgumentError):
            joint_test(random_series, 3, delta=delta)

    def test_invalid_component(self, random_series):
        with pytest.raises(InvalidArgumentError):
            individual_test(random_series, 4, d=3)


@pytest.mark.slow
@pytest.mark.parametrize('dependence', ['iid', 'far1'])
def test_size_under_null(dependence):
    tbl = run_experiment(0, 'slow', dependence, [200], n_reps=400, n_grid_pts=500, n_mc_reps=5000, seed=21)
    for test in ['J', 'M']:
        rate = tbl.loc[tbl['test'] == test, 'rejection_rate'].iloc[0]
        assert .01 <= rate <= .12


@pytest.mark.slow
def test_null_p_values_are_uniform():
    refs = reference_samples(3, .1)
    p_vls = {nm: [] for nm in ['J', 'I1', 'M']}
    for r in range(1000):
        series = gen_series(DgpSpec(500, seed=r))
        reports = spectral_tests(series, 3, references=refs, n_individual=1)
        for nm in p_vls:
            p_vls[nm].append(reports[nm].p_value)
    for nm, vls in p_vls.items():
        assert scipy.stats.kstest(vls, 'uniform').statistic < .08


@pytest.mark.slow
def test_cusum_grows_with_sample_size():
    mean_maxima = []
    for n_curves in [100, 200, 500]:
        maxima = [np.max(np.abs(cusum_vector(eigenvalue_process(_break_series(n_curves, seed=1000*n_curves + r), 3,
                                                                .1))[:, 0])) for r in range(20)]
        mean_maxima.append(np.mean(maxima))
    assert mean_maxima[0] < mean_maxima[1] < mean_maxima[2]
    assert mean_maxima[2]/mean_maxima[0] == pytest.approx(np.sqrt(5), rel=.35)


@pytest.mark.slow
def test_null_break_dates_have_no_atoms_at_the_ends():
    refs = reference_samples(3, .1, n_reps=2000)
    fractions = {nm: [] for nm in ['J', 'I1', 'M']}
    for r in range(500):
        reports = spectral_tests(gen_series(DgpSpec(200, seed=5000 + r)), 3, references=refs, n_individual=1)
        for nm in fractions:
            fractions[nm].append(reports[nm].break_fraction)
    for nm, vls in fractions.items():
        vls = np.array(vls)
        lower = .1 if nm != 'M' else 1/200
        assert np.mean(np.isclose(vls, lower)) <= .1, nm
        assert np.mean(np.isclose(vls, 1.0)) <= .1, nm
