"""  Tools for controlling for multiple comparisons across the individual eigenvalue tests.  """

from typing import Dict, Tuple

import numpy as np
import pandas as pd

from spectral_breaks.errors import InvalidArgumentError

ADJUSTMENTS = ('none', 'bonferroni', 'by')


def apply_by(p_vls: np.ndarray, alpha: float) -> Tuple[np.ndarray, np.ndarray]:
    """ Applies the Benjamini-Yekutieli procedure to control the false discovery rate.

    The procedure is valid under arbitrary dependence between the tests, which is needed here since the individual
    eigenvalue statistics are computed from the same sample.

    Args:

        p_vls: The p values for the null hypotheses to control.  Can be an array of any size.

        alpha: The level to control the false discovery rate at.

    Return:

        reject_tests: A boolean array.  True values correspond to entries in p_vls for null hypotheses that should be
        rejected.

        adjusted_p_vls: The array of FDR adjusted p-values.

    """
    p_vls = np.asarray(p_vls, dtype=float)
    orig_shape = p_vls.shape
    flat_p_vls = np.ravel(p_vls)
    n_tests = len(flat_p_vls)
    if n_tests == 0:
        return np.zeros(orig_shape, dtype=bool), np.zeros(orig_shape)

    sort_order = np.argsort(flat_p_vls, kind='stable')
    sorted_p_vls = flat_p_vls[sort_order]

    # Calculate corrected p values; adjusted values are made monotone from the largest p value down
    c = np.sum(1/np.arange(1, n_tests + 1))
    correction_f = (np.arange(1, n_tests + 1)/n_tests)/c
    sorted_adjusted_p_vls = np.minimum.accumulate((sorted_p_vls/correction_f)[::-1])[::-1]
    sorted_adjusted_p_vls = np.minimum(sorted_adjusted_p_vls, 1.0)

    adjusted_p_vls = np.zeros(n_tests)
    adjusted_p_vls[sort_order] = sorted_adjusted_p_vls
    adjusted_p_vls = np.reshape(adjusted_p_vls, orig_shape)

    return adjusted_p_vls <= alpha, adjusted_p_vls


def apply_bonferroni(p_vls: np.ndarray, alpha: float) -> Tuple[np.ndarray, np.ndarray]:
    """ Applies a Bonferroni correction to p values.

    Args:

        p_vls: An array of p values.  Can be any shape.

        alpha: The level to test for significance at.  Between 0 and 1, inclusive.

    Returns:

        rejected_tests: A boolean array, the same shape as p_vls, indicating which null hypotheses should be rejected

        adjusted_p_vls: Bonferroni adjusted p-values, capped at 1.

    """
    p_vls = np.asarray(p_vls, dtype=float)
    adjusted_p_vls = np.minimum(p_vls*p_vls.size, 1.0)
    return adjusted_p_vls <= alpha, adjusted_p_vls


def adjust_individual_tests(reports: Dict[str, object], method: str = 'by', alpha: float = .05) -> pd.DataFrame:
    """ Tabulates the individual eigenvalue tests with p-values adjusted for multiple comparisons.

    Args:
        reports: Dictionary of test reports as returned by spectral_breaks.stats.breaktest.spectral_tests.  Entries
        with keys 'I1', 'I2', ... holding TestReport objects are used; everything else is ignored.

        method: One of 'none', 'bonferroni' or 'by' (Benjamini-Yekutieli).

        alpha: The level adjusted p-values are compared to.

    Returns:
        tbl: A table with one row per individual test and columns j, statistic, critical_value, p_value, adj_p_value,
        reject, break_index and break_fraction.  reject is based on the adjusted p-values.
    """
    if method not in ADJUSTMENTS:
        raise(InvalidArgumentError('method must be one of ' + ', '.join(ADJUSTMENTS) + '; got ' + str(method) + '.'))

    rows = [r for nm, r in reports.items() if nm.startswith('I') and hasattr(r, 'component')]
    rows = sorted(rows, key=lambda r: r.component)

    p_vls = np.array([r.p_value for r in rows])
    if method == 'bonferroni':
        reject, adj_p_vls = apply_bonferroni(p_vls, alpha)
    elif method == 'by':
        reject, adj_p_vls = apply_by(p_vls, alpha)
    else:
        adj_p_vls = p_vls
        reject = p_vls < alpha

    cols = ['j', 'statistic', 'critical_value', 'p_value', 'adj_p_value', 'reject', 'break_index', 'break_fraction']
    return pd.DataFrame({'j': [r.component for r in rows],
                         'statistic': [r.statistic for r in rows],
                         'critical_value': [r.critical_value for r in rows],
                         'p_value': p_vls,
                         'adj_p_value': adj_p_vls,
                         'reject': np.asarray(reject, dtype=bool),
                         'break_index': [r.break_index for r in rows],
                         'break_fraction': [r.break_fraction for r in rows]}, columns=cols)
