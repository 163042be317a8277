""" Tests for multiple comparison adjustments of the individual eigenvalue tests. """

import numpy as np
import pytest

from spectral_breaks.errors import InvalidArgumentError
from spectral_breaks.stats.breaktest import TestReport
from spectral_breaks.stats.multiple_comparisons import adjust_individual_tests, apply_bonferroni, apply_by


def _individual_reports(p_vls):
    return {'I' + str(j): TestReport('I' + str(j), 1.0 + j, 1.5, p, .05, break_index=10*j, n_curves=100,
                                     component=j) for j, p in enumerate(p_vls, start=1)}


class TestApplyBy:

    def test_known_values(self):
        reject, adj = apply_by(np.array([.01, .02, .03]), .06)
        assert np.allclose(adj, .055)
        assert np.all(reject)

    def test_order_and_shape_preserved(self):
        p_vls = np.array([[.5, .001], [.04, .2]])
        reject, adj = apply_by(p_vls, .05)
        assert adj.shape == (2, 2) and reject.shape == (2, 2)
        assert np.all(adj >= p_vls)
        assert np.all(adj <= 1)
        order = np.argsort(p_vls, axis=None)
        assert np.all(np.diff(np.ravel(adj)[order]) >= 0)
        assert reject[0, 1] and not reject[0, 0]

    def test_empty(self):
        reject, adj = apply_by(np.array([]), .05)
        assert reject.size == 0 and adj.size == 0


def test_bonferroni():
    reject, adj = apply_bonferroni(np.array([.01, .5]), .05)
    assert np.allclose(adj, [.02, 1.0])
    assert np.array_equal(reject, [True, False])


class TestAdjustIndividualTests:

    @pytest.mark.parametrize('method', ['none', 'bonferroni', 'by'])
    def test_table(self, method):
        reports = _individual_reports([.04, .001, .3])
        reports['J'] = TestReport('J', 10.0, 4.0, .001, .05, break_index=50, n_curves=100)
        tbl = adjust_individual_tests(reports, method=method)
        assert list(tbl['j']) == [1, 2, 3]
        assert list(tbl.columns) == ['j', 'statistic', 'critical_value', 'p_value', 'adj_p_value', 'reject',
                                     'break_index', 'break_fraction']
        assert np.all(tbl['adj_p_value'] >= tbl['p_value'])
        assert bool(tbl['reject'].iloc[1])
        assert list(tbl['break_fraction']) == [.1, .2, .3]

    def test_none_keeps_p_values(self):
        tbl = adjust_individual_tests(_individual_reports([.04, .001, .3]), method='none')
        assert np.array_equal(tbl['adj_p_value'], tbl['p_value'])
        assert list(tbl['reject']) == [True, True, False]

    def test_failed_tests_are_skipped(self):
        reports = _individual_reports([.04, .001])
        reports['I3'] = RuntimeError('singular')
        assert len(adjust_individual_tests(reports)) == 2

    def test_unknown_method(self):
        with pytest.raises(InvalidArgumentError):
            adjust_individual_tests(_individual_reports([.1]), method='holm')
