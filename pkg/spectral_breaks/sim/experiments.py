""" Monte-Carlo studies of the size, power and break dating of the spectral and trace break tests.

A study is made up of cells, one per combination of setting, decay, dependence, sample size, break size and break
location.  Replication r of a cell draws from a random stream seeded by (seed, cell id, r), where the cell id is a hash
of the cell description, so results do not depend on how replications are distributed over processes.
"""

import hashlib
import math
import pathlib
import warnings
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from spectral_breaks.errors import InvalidArgumentError
from spectral_breaks.fda.basis import fourier_basis
from spectral_breaks.sim.generation import DgpSpec, default_b_grid, gen_series, setting_multipliers
from spectral_breaks.stats.breaktest import reference_samples, spectral_tests
from spectral_breaks.stats.limit_dists import LimitDistSpec
from spectral_breaks.stats.longrun import KernelSpec
from spectral_breaks.utils.parallel import pooled_map

RESULT_COLUMNS = ['setting', 'decay', 'dependence', 'n', 'b', 'tau', 'test', 'rejection_rate',
                  'median_break_fraction', 'q1', 'q3', 'failures']

MIN_REPS = 100

# Number of replications handled by one job
REPS_PER_JOB = 25

FLOAT_FORMAT = '%.6f'


def cell_id(setting: int, decay: str, dependence: str, n_curves: int, b: float, tau: float) -> int:
    """ Returns a 32-bit integer identifying a simulation cell. """
    desc = '|'.join([str(setting), decay, dependence, str(n_curves), repr(float(b)), repr(float(tau))])
    return int(hashlib.sha256(desc.encode()).hexdigest()[:8], 16)


def _run_replications(dgp_kwargs: dict, seed: int, c_id: int, reps: Sequence[int], d: int, delta: float,
                      kernel: KernelSpec, alpha: float,
                      references: Dict[str, Tuple[LimitDistSpec, np.ndarray]]) -> List[Dict[str, tuple]]:
    """ Simulates replications of one cell and applies the tests to each.

    Returns:
        results: One dictionary per replication mapping test names to (reject, break_fraction), or to None if the test
        failed numerically.
    """
    basis = fourier_basis(dgp_kwargs['n_basis'])
    dgp = DgpSpec(**dgp_kwargs)

    results = []
    for r in reps:
        rng = np.random.default_rng(np.random.SeedSequence([seed, c_id, r]))
        series = gen_series(dgp, rng=rng, basis=basis)
        with warnings.catch_warnings():
            warnings.simplefilter('ignore')
            reports = spectral_tests(series, d=d, delta=delta, kernel=kernel, alpha=alpha, references=references,
                                     raise_errors=False)
        results.append({nm: (None if isinstance(rep, Exception) else (rep.reject, rep.break_fraction))
                        for nm, rep in reports.items()})
    return results


def _run_replications_arg_unpack(args):
    return _run_replications(*args)


def _summarize(outcomes: List[tuple]) -> dict:
    """ Summarizes the (reject, break_fraction) outcomes of one test in one cell; None entries are failures. """
    ok = [o for o in outcomes if o is not None]
    n_failures = len(outcomes) - len(ok)
    if len(ok) == 0:
        return {'rejection_rate': np.nan, 'median_break_fraction': np.nan, 'q1': np.nan, 'q3': np.nan,
                'failures': n_failures}

    rejects = np.array([o[0] for o in ok], dtype=float)
    fracs = np.array([o[1] for o in ok], dtype=float)
    q1, med, q3 = np.quantile(fracs, [.25, .5, .75])
    return {'rejection_rate': float(np.mean(rejects)), 'median_break_fraction': float(med), 'q1': float(q1),
            'q3': float(q3), 'failures': n_failures}


def run_experiment(setting: int, decay: str, dependence: str, n_list: Sequence[int], b_grid: Sequence[float] = None,
                   tau: float = .5, n_reps: int = 1000, delta: float = .1, alpha: float = .05, seed: int = 0,
                   d: int = 3, kernel: KernelSpec = None, n_basis: int = 21, kappa: float = .8,
                   operator_norm: str = 'spectral', n_grid_pts: int = 1000, n_mc_reps: int = 10000,
                   references: Dict[str, Tuple[LimitDistSpec, np.ndarray]] = None,
                   cache_dir: Union[str, pathlib.Path] = None, n_processes: int = 1,
                   verbose: bool = False) -> pd.DataFrame:
    """ Estimates rejection rates and break date distributions for one setting, decay and dependence structure.

    For each sample size in n_list and break size in b_grid, n_reps series are simulated and the joint test, the
    individual tests for j = 1, ..., d and the trace test are applied.  Replications in which a test fails because of
    a singular long-run variance or a degenerate spectrum are counted as failures of that test and excluded from its
    rejection rate.

    Args:
        setting: The simulation setting, one of 0 (null), 1, 2, 3 or 4.

        decay: 'fast' or 'slow'.

        dependence: 'iid' or 'far1'.

        n_list: The sample sizes to simulate.

        b_grid: The break sizes to simulate.  Defaults to default_b_grid(setting).

        tau: The break location as a fraction of n.

        n_reps: The number of replications per cell.  At least 100.

        delta: The trimming parameter of the eigenvalue tests.

        alpha: The level of the tests.

        seed: The base seed of the study.

        d: The number of eigenvalues for the joint test.

        kernel: The lag-window kernel.  Defaults to Bartlett with automatic bandwidth.

        n_basis: The number of basis functions of the simulated curves.

        kappa: The norm of the autoregressive operator for 'far1'.

        operator_norm: 'spectral' or 'frobenius'.

        n_grid_pts: Grid points for simulating reference samples of the limit distributions.

        n_mc_reps: Replications for simulating reference samples of the limit distributions.

        references: Reference samples as returned by spectral_breaks.stats.breaktest.reference_samples.  If None they
        are simulated (or loaded from cache_dir) with seed.

        cache_dir: Folder of the reference sample cache.

        n_processes: The number of processes to distribute replications over.

        verbose: True if progress should be printed.

    Returns:
        tbl: A table with columns RESULT_COLUMNS and one row per cell and test.
    """
    if n_reps < MIN_REPS:
        raise(InvalidArgumentError('n_reps must be at least ' + str(MIN_REPS) + '; got ' + str(n_reps) + '.'))
    if b_grid is None:
        b_grid = default_b_grid(setting)
    kernel = kernel if kernel is not None else KernelSpec()

    if len(n_list) == 0 or len(b_grid) == 0:
        return pd.DataFrame(columns=RESULT_COLUMNS)

    if references is None:
        references = reference_samples(d, delta, n_grid_pts=n_grid_pts, n_reps=n_mc_reps, seed=seed,
                                       cache_dir=cache_dir, n_processes=n_processes)

    rows = []
    for n_curves in n_list:
        for b in b_grid:
            mults = setting_multipliers(setting, b, n_basis)
            dgp_kwargs = {'n_curves': int(n_curves), 'n_basis': n_basis, 'decay': decay, 'dependence': dependence,
                          'kappa': kappa, 'tau': tau, 'b': mults, 'seed': seed, 'operator_norm': operator_norm}
            c_id = cell_id(setting, decay, dependence, n_curves, b, tau)

            if verbose:
                print('Setting ' + str(setting) + ', ' + decay + ', ' + dependence + ', n = ' + str(n_curves) +
                      ', b = ' + str(b) + ', tau = ' + str(tau))

            n_jobs = int(math.ceil(n_reps/REPS_PER_JOB))
            jobs = [(dgp_kwargs, seed, c_id, range(j_i*REPS_PER_JOB, min(n_reps, (j_i + 1)*REPS_PER_JOB)), d, delta,
                     kernel, alpha, references) for j_i in range(n_jobs)]
            job_results = pooled_map(_run_replications_arg_unpack, jobs, n_processes=n_processes, verbose=verbose,
                                     desc='Replications')
            rep_results = [r for job_r in job_results for r in job_r]

            for test_name in rep_results[0].keys():
                row = {'setting': setting, 'decay': decay, 'dependence': dependence, 'n': int(n_curves),
                       'b': float(b), 'tau': float(tau), 'test': test_name}
                row.update(_summarize([r[test_name] for r in rep_results]))
                rows.append(row)

    return pd.DataFrame(rows, columns=RESULT_COLUMNS)


def run_study(config, cache_dir: Union[str, pathlib.Path] = None, verbose: bool = False) -> pd.DataFrame:
    """ Runs run_experiment over every (setting, decay, dependence, tau) combination of a study configuration.

    Args:
        config: A spectral_breaks.config.ExperimentConfig object.

        cache_dir: Folder of the reference sample cache.

        verbose: True if progress should be printed.

    Returns:
        tbl: The concatenated result tables, with columns RESULT_COLUMNS.  Empty (header only) if the configuration
        has no cells.
    """
    cells = [(s, dc, dp, t) for s in config.settings for dc in config.decays for dp in config.dependences
             for t in config.taus]
    if len(cells) == 0 or len(config.n_list) == 0:
        return pd.DataFrame(columns=RESULT_COLUMNS)

    references = reference_samples(config.d, config.delta, n_grid_pts=config.mc_grid, n_reps=config.mc_reps,
                                   seed=config.seed, cache_dir=cache_dir, n_processes=config.n_processes)

    tbls = []
    for setting, decay, dependence, tau in cells:
        b_grid = config.b_grid if config.b_grid is not None else default_b_grid(setting)
        tbls.append(run_experiment(setting, decay, dependence, config.n_list, b_grid=b_grid, tau=tau,
                                   n_reps=config.n_reps, delta=config.delta, alpha=config.alpha, seed=config.seed,
                                   d=config.d, kernel=config.kernel, n_basis=config.n_basis, kappa=config.kappa,
                                   operator_norm=config.operator_norm, references=references,
                                   n_processes=config.n_processes, verbose=verbose))

    return pd.concat(tbls, ignore_index=True)[RESULT_COLUMNS]


def save_results(tbl: pd.DataFrame, f: Union[str, pathlib.Path]):
    """ Writes a result table to CSV with a fixed column order and float format. """
    tbl[RESULT_COLUMNS].to_csv(f, index=False, float_format=FLOAT_FORMAT, na_rep='nan')
