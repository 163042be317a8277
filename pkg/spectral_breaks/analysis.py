""" The analysis pipeline: read curves, smooth, demean, select d, test for breaks and date them.

The pipeline writes a JSON report together with CSV sidecars holding the partial-sample processes, the spectrum,
eigenvalue tables before and after the estimated break and variation bands around the mean curve.
"""

import json
import pathlib

import numpy as np
import pandas as pd

import spectral_breaks
from spectral_breaks.config import AnalysisConfig
from spectral_breaks.fda.basis import FunctionalSeries, center_and_segment_demean, fourier_basis, smooth_to_basis
from spectral_breaks.fda.spectrum import eigen_decompose, eigenvalue_process, explained_variance_table
from spectral_breaks.fda.spectrum import partial_covariance, segment_covariance, trace_process, tve_dimension
from spectral_breaks.fda.spectrum import variation_band
from spectral_breaks.fileio.curves import read_coef_csv, read_grid_csv, save_table
from spectral_breaks.stats.breaktest import check_not_degenerate, cusum_vector, reference_samples, spectral_tests
from spectral_breaks.stats.multiple_comparisons import adjust_individual_tests

# Number of points variation bands are evaluated at
N_BAND_PTS = 101


def load_series(config: AnalysisConfig) -> FunctionalSeries:
    """ Reads the input of an analysis and represents it in a Fourier basis. """
    basis = fourier_basis(config.n_basis)
    if config.fmt == 'grid':
        raw, grid = read_grid_csv(config.input, grid_header=config.grid_header)
        return smooth_to_basis(raw, basis, grid=grid)
    return FunctionalSeries(read_coef_csv(config.input, config.n_basis), basis)


def _spectrum_table(eig_vls: np.ndarray) -> pd.DataFrame:
    total = np.sum(eig_vls)
    return pd.DataFrame({'j': np.arange(1, len(eig_vls) + 1), 'eigenvalue': eig_vls,
                         'pve': eig_vls/total, 'tve': np.cumsum(eig_vls)/total})


def _process_tables(series: FunctionalSeries, d: int, delta: float):
    e_process = eigenvalue_process(series, d, delta)
    kappa = cusum_vector(e_process)
    eig_tbl = {'k': e_process.grid, 'x': e_process.fractions}
    for j in range(d):
        eig_tbl['lambda_' + str(j + 1)] = e_process.values[:, j]
    for j in range(d):
        eig_tbl['kappa_' + str(j + 1)] = kappa[:, j]

    t_process = trace_process(series)
    x = t_process.fractions
    trace_tbl = {'k': np.arange(1, series.n_curves + 1), 'x': x, 'trace': t_process.values,
                 'cusum': t_process.values - x*t_process.values[-1]}

    return pd.DataFrame(eig_tbl), pd.DataFrame(trace_tbl)


def _band_table(raw_series: FunctionalSeries, series: FunctionalSeries, k_hat: int, d: int) -> pd.DataFrame:
    t = np.linspace(0, 1, N_BAND_PTS)
    tbl = {'t': t}
    for lbl, start, stop in [('before', 0, k_hat), ('after', k_hat, series.n_curves)]:
        eig = eigen_decompose(segment_covariance(series, start, stop), d)
        mn = np.mean(raw_series.coefs[start:stop, :], axis=0)
        band = variation_band(mn, eig, series.basis, t)
        tbl['mean_' + lbl] = band[0]
        tbl['lower_' + lbl] = band[1]
        tbl['upper_' + lbl] = band[2]
    return pd.DataFrame(tbl)


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, pathlib.Path):
        return str(o)
    raise TypeError('Object of type ' + type(o).__name__ + ' is not JSON serializable')


def run_analysis(config: AnalysisConfig, verbose: bool = False) -> dict:
    """ Runs the analysis pipeline and writes its report.

    Args:
        config: The analysis configuration.

        verbose: True if progress should be printed.

    Returns:
        report: The contents of the JSON report.

    Raises:
        OSError: If the input cannot be read or the outputs cannot be written.

        InvalidDataError, UnderdeterminedFitError: If the input is malformed or cannot be fit.

        DegenerateSpectrumError, SingularLRVError: If the tests cannot be computed.
    """

    # ==================================================================================================================
    # Read, smooth and demean
    raw_series = load_series(config)
    series = center_and_segment_demean(raw_series, config.mean_breaks)
    check_not_degenerate(series, scale=float(np.mean(raw_series.sq_norms())))
    n_curves = series.n_curves
    if verbose:
        print('Read ' + str(n_curves) + ' curves from ' + str(config.input) + '.')

    # ==================================================================================================================
    # Select the number of eigenvalues to test
    all_eig_vls = partial_covariance(series, n_curves).eigenvalues()
    if config.d == 'auto':
        d = tve_dimension(all_eig_vls, config.tve)
        d_selection = 'tve'
    else:
        d = config.d
        d_selection = 'fixed'
    if verbose:
        print('Testing d = ' + str(d) + ' eigenvalues.')

    # ==================================================================================================================
    # Test
    refs = reference_samples(d, config.delta, n_grid_pts=config.mc_grid, n_reps=config.mc_reps, seed=config.seed,
                             cache_dir=config.cache_dir, n_processes=config.n_processes)
    reports = spectral_tests(series, d, delta=config.delta, kernel=config.kernel, alpha=config.alpha,
                             references=refs)
    individual_tbl = adjust_individual_tests(reports, method=config.adjust, alpha=config.alpha)

    # ==================================================================================================================
    # Describe the spectrum before and after the estimated break
    k_hat = reports['J'].break_index
    eig_tbl, trace_tbl = _process_tables(series, d, config.delta)
    spectrum_tbl = _spectrum_table(all_eig_vls)
    before_after_tbl = None
    band_tbl = None
    if k_hat < n_curves:
        before_after_tbl = explained_variance_table(segment_covariance(series, 0, k_hat).eigenvalues(),
                                                    segment_covariance(series, k_hat, n_curves).eigenvalues(), d)
        band_tbl = _band_table(raw_series, series, k_hat, d)

    # ==================================================================================================================
    # Write outputs
    out = pathlib.Path(config.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    sidecars = {'eigen_process': eig_tbl, 'trace_process': trace_tbl, 'spectrum': spectrum_tbl,
                'individual_tests': individual_tbl, 'before_after': before_after_tbl, 'variation_bands': band_tbl}
    sidecar_files = dict()
    for nm, tbl in sidecars.items():
        if tbl is None:
            continue
        f = out.with_name(out.stem + '_' + nm + '.csv')
        save_table(tbl, f)
        sidecar_files[nm] = f.name

    report = {'version': spectral_breaks.__version__,
              'config': config.to_dict(),
              'n_curves': n_curves,
              'n_basis': series.n_basis,
              'd': d,
              'd_selection': d_selection,
              'tests': {nm: r.to_dict() for nm, r in reports.items()},
              'individual_tests': individual_tbl.to_dict(orient='records'),
              'break_index': k_hat,
              'break_fraction': k_hat/n_curves,
              'spectrum': spectrum_tbl.to_dict(orient='records'),
              'before_after': None if before_after_tbl is None else before_after_tbl.to_dict(orient='records'),
              'sidecars': sidecar_files}

    with open(out, 'w') as f_h:
        json.dump(report, f_h, indent=2, default=_json_default)

    if verbose:
        print('Wrote report to ' + str(out) + '.')

    return report
