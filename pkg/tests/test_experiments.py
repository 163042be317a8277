""" Tests for Monte-Carlo studies of the break tests. """

import numpy as np
import pytest

from spectral_breaks.config import ExperimentConfig
from spectral_breaks.errors import InvalidArgumentError
from spectral_breaks.sim.experiments import RESULT_COLUMNS, _summarize, cell_id, run_experiment, run_study
from spectral_breaks.sim.experiments import save_results


def _small_experiment(references, **kwargs):
    return run_experiment(1, 'slow', 'iid', [40], b_grid=[1.0, 3.0], n_reps=100, n_basis=5, seed=2,
                          references=references, **kwargs)


def test_cell_id():
    assert cell_id(1, 'slow', 'iid', 100, 2.0, .5) == cell_id(1, 'slow', 'iid', 100, 2, .5)
    assert cell_id(1, 'slow', 'iid', 100, 2.0, .5) != cell_id(2, 'slow', 'iid', 100, 2.0, .5)
    assert 0 <= cell_id(0, 'fast', 'far1', 500, 1.0, .25) < 2**32


def test_summarize_counts_failures():
    summary = _summarize([None, (True, .4), (False, .6), None])
    assert summary['failures'] == 2
    assert summary['rejection_rate'] == .5
    assert summary['median_break_fraction'] == pytest.approx(.5)
    assert summary['q1'] <= summary['median_break_fraction'] <= summary['q3']


def test_summarize_all_failed():
    summary = _summarize([None, None])
    assert summary['failures'] == 2
    assert np.isnan(summary['rejection_rate'])


class TestRunExperiment:

    def test_table(self, small_references):
        tbl = _small_experiment(small_references)
        assert list(tbl.columns) == RESULT_COLUMNS
        assert len(tbl) == 10
        assert set(tbl['test']) == {'J', 'I1', 'I2', 'I3', 'M'}
        assert np.all((tbl['rejection_rate'] >= 0) & (tbl['rejection_rate'] <= 1))
        assert np.all(tbl['q1'] <= tbl['median_break_fraction'])
        assert np.all(tbl['median_break_fraction'] <= tbl['q3'])

    def test_independent_of_process_count(self, small_references, tmp_path):
        serial = _small_experiment(small_references, n_processes=1)
        pooled = _small_experiment(small_references, n_processes=2)
        save_results(serial, tmp_path / 'serial.csv')
        save_results(pooled, tmp_path / 'pooled.csv')
        assert (tmp_path / 'serial.csv').read_bytes() == (tmp_path / 'pooled.csv').read_bytes()

    def test_seed_changes_results(self, small_references):
        a = _small_experiment(small_references)
        b = run_experiment(1, 'slow', 'iid', [40], b_grid=[1.0, 3.0], n_reps=100, n_basis=5, seed=3,
                           references=small_references)
        assert not a['median_break_fraction'].equals(b['median_break_fraction'])

    def test_no_cells(self, small_references):
        tbl = run_experiment(0, 'slow', 'iid', [], n_reps=100, references=small_references)
        assert tbl.shape == (0, len(RESULT_COLUMNS))

    def test_too_few_reps(self, small_references):
        with pytest.raises(InvalidArgumentError):
            run_experiment(0, 'slow', 'iid', [40], n_reps=99, references=small_references)


def test_empty_study_writes_header(tmp_path):
    tbl = run_study(ExperimentConfig(n_list=[]))
    save_results(tbl, tmp_path / 'study.csv')
    assert (tmp_path / 'study.csv').read_text().strip() == ','.join(RESULT_COLUMNS)


def test_study(tmp_path):
    config = ExperimentConfig(settings=[0, 2], decays=['fast'], n_list=[30], n_reps=100, n_basis=5, d=2,
                              mc_grid=100, mc_reps=1000)
    tbl = run_study(config, cache_dir=tmp_path)
    assert list(tbl.columns) == RESULT_COLUMNS
    # Setting 0 has one break size and setting 2 has five; each cell has rows J, I1, I2 and M
    assert len(tbl) == 4*(1 + 5)
    assert set(tbl['setting']) == {0, 2}


@pytest.mark.slow
class TestMonteCarloAcceptance:

    # Empirical sizes of (J, I1, I2, I3, M) at alpha = .05 and delta = .1 from 1000 replications
    NULL_SIZES = [('slow', 'iid', 500, (.04, .05, .05, .05, .05), .02),
                  ('slow', 'far1', 500, (.06, .06, .06, .06, .05), .02),
                  ('fast', 'iid', 500, (.04, .05, .05, .05, .05), .02),
                  ('fast', 'far1', 500, (.06, .06, .04, .04, .04), .02),
                  ('fast', 'far1', 200, (.06, .07, .05, .05, .03), .025)]

    @pytest.mark.parametrize('decay, dependence, n_curves, sizes, tol', NULL_SIZES)
    def test_null_sizes(self, decay, dependence, n_curves, sizes, tol):
        tbl = run_experiment(0, decay, dependence, [n_curves], n_reps=1000, seed=1).set_index('test')
        rates = tbl.loc[['J', 'I1', 'I2', 'I3', 'M'], 'rejection_rate'].to_numpy()
        assert np.all(np.abs(rates - np.array(sizes)) <= tol), str(rates)

    def test_power_grows_with_break_size(self):
        tbl = run_experiment(1, 'slow', 'iid', [200], b_grid=[1.0, 1.5, 2.0, 3.0, 5.0], n_reps=300, seed=2)
        rates = tbl.loc[tbl['test'] == 'I1', 'rejection_rate'].to_numpy()
        assert np.all(np.diff(rates) >= -.05)
        assert rates[-1] >= .95

    def test_power_grows_with_sample_size(self):
        tbl = run_experiment(1, 'slow', 'iid', [100, 200, 500], b_grid=[2.0], n_reps=500, seed=5)
        for test in ['J', 'I1']:
            rates = tbl.loc[tbl['test'] == test].sort_values('n')['rejection_rate'].to_numpy()
            assert np.all(np.diff(rates) >= -.03), test + ': ' + str(rates)

    def test_large_break_in_first_eigenvalue(self):
        tbl = run_experiment(1, 'slow', 'iid', [500], b_grid=[5.0], n_reps=300, seed=6).set_index('test')
        assert tbl.loc['J', 'rejection_rate'] >= .99
        assert tbl.loc['I1', 'rejection_rate'] >= .99

    def test_spread_break_favors_joint_test(self):
        tbl = run_experiment(4, 'slow', 'iid', [500], b_grid=[2.0], n_reps=300, seed=7).set_index('test')
        assert tbl.loc['J', 'rejection_rate'] >= .95

    def test_trace_test_power(self):
        tbl = run_experiment(1, 'slow', 'iid', [500], b_grid=[3.0], n_reps=300, seed=8).set_index('test')
        assert tbl.loc['M', 'rejection_rate'] >= .9

    @pytest.mark.parametrize('tau', [.25, .5])
    def test_break_dating(self, tau):
        tbl = run_experiment(1, 'slow', 'iid', [500], b_grid=[3.0], tau=tau, n_reps=200, seed=3)
        row = tbl.loc[tbl['test'] == 'I1'].iloc[0]
        assert row['rejection_rate'] >= .95
        assert abs(row['median_break_fraction'] - tau) <= .05

    def test_break_in_third_eigenvalue_moves_to_second(self):
        tbl = run_experiment(3, 'slow', 'iid', [100], b_grid=[5.0], n_reps=400, seed=4).set_index('test')
        assert tbl.loc['I2', 'rejection_rate'] > tbl.loc['I3', 'rejection_rate']
