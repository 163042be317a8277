""" Command line front end.

    spectral-breaks analyze --input F --format {grid,coef} ... --out R.json

    spectral-breaks simulate --config F --out T.csv

    spectral-breaks quantiles --family {J,I,M} --d 3 --delta 0.1 --alpha 0.1,0.05,0.01

Exit codes: 0 on success (whether or not a test rejects), 2 for invalid arguments or configuration, 3 for invalid input
data, 4 for I/O errors, 5 for a degenerate spectrum and 6 for a singular long-run covariance estimate.
"""

import argparse
import sys
from typing import List, Sequence

import pandas as pd

import spectral_breaks
from spectral_breaks.analysis import run_analysis
from spectral_breaks.config import AnalysisConfig, load_experiment_config
from spectral_breaks.errors import ConfigError, DegenerateSpectrumError, InvalidArgumentError, InvalidDataError
from spectral_breaks.errors import SingularLRVError, UnderdeterminedFitError
from spectral_breaks.sim.experiments import run_study, save_results
from spectral_breaks.stats.limit_dists import DEFAULT_CACHE_DIR, FAMILIES, LimitDistSpec, critical_value
from spectral_breaks.stats.limit_dists import reference_sample
from spectral_breaks.stats.longrun import KERNEL_KINDS
from spectral_breaks.stats.multiple_comparisons import ADJUSTMENTS

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_IO = 4
EXIT_DEGENERATE = 5
EXIT_SINGULAR_LRV = 6


def _int_list(vl: str) -> List[int]:
    try:
        return [int(v) for v in vl.split(',') if v.strip() != '']
    except ValueError:
        raise argparse.ArgumentTypeError('expected comma separated integers; got ' + repr(vl))


def _float_list(vl: str) -> List[float]:
    try:
        return [float(v) for v in vl.split(',') if v.strip() != '']
    except ValueError:
        raise argparse.ArgumentTypeError('expected comma separated numbers; got ' + repr(vl))


def _d_arg(vl: str):
    if vl == 'auto':
        return vl
    try:
        return int(vl)
    except ValueError:
        raise argparse.ArgumentTypeError('expected auto or an integer; got ' + repr(vl))


def _bandwidth_arg(vl: str):
    if vl == 'auto':
        return vl
    try:
        return float(vl)
    except ValueError:
        raise argparse.ArgumentTypeError('expected auto or a number; got ' + repr(vl))


def _add_mc_args(parser: argparse.ArgumentParser):
    parser.add_argument('--mc-grid', type=int, default=1000, help='grid points of simulated Brownian bridges')
    parser.add_argument('--mc-reps', type=int, default=10000, help='replications of the limit distributions')
    parser.add_argument('--seed', type=int, default=0, help='seed of all random streams')


def _add_run_args(parser: argparse.ArgumentParser):
    parser.add_argument('--processes', type=int, default=1, help='number of worker processes')
    parser.add_argument('--cache-dir', default=str(DEFAULT_CACHE_DIR), help='folder of the quantile cache')
    parser.add_argument('--no-cache', action='store_true', help='do not read or write the quantile cache')
    parser.add_argument('--verbose', action='store_true', help='print progress')


def build_parser() -> argparse.ArgumentParser:
    """ Builds the argument parser of the command line tool. """
    parser = argparse.ArgumentParser(prog='spectral-breaks',
                                     description='Structural break tests for the spectrum and trace of the '
                                                 'covariance operator of a functional time series.')
    parser.add_argument('--version', action='version', version='%(prog)s ' + spectral_breaks.__version__)
    subparsers = parser.add_subparsers(dest='command', required=True)

    analyze = subparsers.add_parser('analyze', help='test a functional time series for breaks')
    analyze.add_argument('--input', required=True, help='CSV file with one curve per row')
    analyze.add_argument('--format', choices=['grid', 'coef'], default='grid', dest='fmt',
                         help='curves sampled on a grid or given by basis coefficients')
    analyze.add_argument('--grid-header', action='store_true', help='first row of a grid input holds the grid')
    analyze.add_argument('--basis-dim', type=int, default=21, help='number of Fourier basis functions')
    analyze.add_argument('--mean-breaks', type=_int_list, default=[], help='comma separated mean break indices')
    analyze.add_argument('--d', type=_d_arg, default='auto', help='number of eigenvalues to test, or auto')
    analyze.add_argument('--tve', type=float, default=.85, help='variance fraction used to select d when auto')
    analyze.add_argument('--delta', type=float, default=.1, help='trimming parameter')
    analyze.add_argument('--kernel', choices=KERNEL_KINDS, default='bartlett', help='lag-window kernel')
    analyze.add_argument('--bandwidth', type=_bandwidth_arg, default='auto', help='kernel bandwidth, or auto')
    analyze.add_argument('--alpha', type=float, default=.05, help='level of the tests')
    analyze.add_argument('--adjust', choices=ADJUSTMENTS, default='by',
                         help='multiple comparison adjustment of the individual tests')
    analyze.add_argument('--out', default='report.json', help='path of the JSON report')
    _add_mc_args(analyze)
    _add_run_args(analyze)

    simulate = subparsers.add_parser('simulate', help='run a Monte-Carlo study')
    simulate.add_argument('--config', required=True, help='key = value study configuration')
    simulate.add_argument('--out', required=True, help='path of the CSV result table')
    simulate.add_argument('--processes', type=int, default=None,
                          help='number of worker processes (overrides the configuration)')
    simulate.add_argument('--cache-dir', default=str(DEFAULT_CACHE_DIR), help='folder of the quantile cache')
    simulate.add_argument('--no-cache', action='store_true', help='do not read or write the quantile cache')
    simulate.add_argument('--verbose', action='store_true', help='print progress')

    quantiles = subparsers.add_parser('quantiles', help='simulate critical values of the limit distributions')
    quantiles.add_argument('--family', choices=FAMILIES, required=True, help='limit distribution')
    quantiles.add_argument('--d', type=int, default=1, help='number of bridges (family J)')
    quantiles.add_argument('--delta', type=float, default=.1, help='trimming parameter (families J and I)')
    quantiles.add_argument('--alpha', type=_float_list, default=[.1, .05, .01], help='comma separated levels')
    quantiles.add_argument('--continuity-correction', action='store_true',
                           help='shift discretely monitored suprema toward the continuous supremum')
    _add_mc_args(quantiles)
    _add_run_args(quantiles)

    return parser


def _cache_dir(args):
    return None if args.no_cache else args.cache_dir


def cmd_analyze(args) -> int:
    config = AnalysisConfig(input=args.input, fmt=args.fmt, n_basis=args.basis_dim, mean_breaks=args.mean_breaks,
                            d=args.d, tve=args.tve, delta=args.delta, kernel=args.kernel, bandwidth=args.bandwidth,
                            alpha=args.alpha, mc_grid=args.mc_grid, mc_reps=args.mc_reps, seed=args.seed,
                            out=args.out, adjust=args.adjust, grid_header=args.grid_header,
                            n_processes=args.processes, cache_dir=_cache_dir(args))
    report = run_analysis(config, verbose=args.verbose)

    print('d = ' + str(report['d']) + ' (' + report['d_selection'] + ')')
    for nm, r in report['tests'].items():
        print(nm + ': statistic = ' + '{:.4f}'.format(r['statistic']) + ', p = ' + '{:.4f}'.format(r['p_value']) +
              ', break at k = ' + str(r['break_index']) + ' (' + '{:.3f}'.format(r['break_fraction']) + ')')
    print('Report written to ' + str(config.out))
    return EXIT_OK


def cmd_simulate(args) -> int:
    overrides = dict()
    if args.processes is not None:
        overrides['n_processes'] = args.processes
    config = load_experiment_config(args.config, **overrides)
    tbl = run_study(config, cache_dir=_cache_dir(args), verbose=args.verbose)
    save_results(tbl, args.out)
    print('Wrote ' + str(tbl.shape[0]) + ' rows to ' + str(args.out))
    return EXIT_OK


def cmd_quantiles(args) -> int:
    spec = LimitDistSpec(args.family, n_dims=args.d, delta=args.delta, n_grid_pts=args.mc_grid,
                         n_reps=args.mc_reps, seed=args.seed, continuity_correction=args.continuity_correction)
    for alpha in args.alpha:
        if not (0 < alpha < 1):
            raise(InvalidArgumentError('alpha must be in (0, 1); got ' + str(alpha) + '.'))

    sample, cache_hit = reference_sample(spec, cache_dir=_cache_dir(args), n_processes=args.processes,
                                         verbose=args.verbose)
    tbl = pd.DataFrame({'family': spec.family, 'd': spec.n_dims, 'delta': spec.delta, 'alpha': args.alpha,
                        'quantile': [critical_value(sample, a) for a in args.alpha]})
    print(tbl.to_string(index=False, float_format=lambda v: '{:.4f}'.format(v)))
    print('cache: ' + ('hit' if cache_hit else 'miss'))
    return EXIT_OK


COMMANDS = {'analyze': cmd_analyze, 'simulate': cmd_simulate, 'quantiles': cmd_quantiles}


def main(argv: Sequence[str] = None) -> int:
    """ Runs the command line tool, returning its exit code. """
    args = build_parser().parse_args(argv)

    try:
        return COMMANDS[args.command](args)
    except SingularLRVError as e:
        print('error: ' + str(e), file=sys.stderr)
        return EXIT_SINGULAR_LRV
    except DegenerateSpectrumError as e:
        print('error: ' + str(e), file=sys.stderr)
        return EXIT_DEGENERATE
    except (InvalidDataError, UnderdeterminedFitError) as e:
        print('error: ' + str(e), file=sys.stderr)
        return EXIT_DATA
    except (ConfigError, InvalidArgumentError) as e:
        print('error: ' + str(e), file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print('error: ' + str(e), file=sys.stderr)
        return EXIT_IO


def run():
    """ Entry point of the console script. """
    sys.exit(main())
