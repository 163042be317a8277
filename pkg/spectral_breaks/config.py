""" Configuration objects for the analysis pipeline and simulation studies.

Simulation studies are configured with flat text files of key = value lines.  Lines starting with # are comments and
list values are comma separated.  For example:

    # Null block of the size study
    settings = null
    decays = slow
    dependences = iid, far1
    n = 100, 200, 500
    reps = 1000
    seed = 1

Unknown keys are an error.
"""

import pathlib
from typing import List, Sequence, Union

from spectral_breaks.errors import ConfigError, InvalidArgumentError
from spectral_breaks.fileio.curves import FORMATS
from spectral_breaks.sim.generation import DECAYS, DEPENDENCES, OPERATOR_NORMS, SETTINGS
from spectral_breaks.stats.limit_dists import DEFAULT_CACHE_DIR, MIN_GRID_PTS, MIN_REPS
from spectral_breaks.stats.longrun import KernelSpec
from spectral_breaks.stats.multiple_comparisons import ADJUSTMENTS


def _kernel(kind: str, bandwidth: Union[str, float]) -> KernelSpec:
    try:
        return KernelSpec(kind, bandwidth)
    except (InvalidArgumentError, ValueError) as e:
        raise(ConfigError(str(e)))


def _check_mc(mc_grid: int, mc_reps: int):
    if mc_grid < MIN_GRID_PTS:
        raise(ConfigError('mc_grid must be at least ' + str(MIN_GRID_PTS) + '.'))
    if mc_reps < MIN_REPS:
        raise(ConfigError('mc_reps must be at least ' + str(MIN_REPS) + '.'))


class AnalysisConfig:
    """ Settings of the analysis pipeline: smooth, demean, select d, test and date. """

    def __init__(self, input: Union[str, pathlib.Path], fmt: str = 'grid', n_basis: int = 21,
                 mean_breaks: Sequence[int] = None, d: Union[int, str] = 'auto', tve: float = .85,
                 delta: float = .1, kernel: str = 'bartlett', bandwidth: Union[float, str] = 'auto',
                 alpha: float = .05, mc_grid: int = 1000, mc_reps: int = 10000, seed: int = 0,
                 out: Union[str, pathlib.Path] = 'report.json', adjust: str = 'by', grid_header: bool = False,
                 n_processes: int = 1, cache_dir: Union[str, pathlib.Path, None] = DEFAULT_CACHE_DIR):
        """ Creates a new AnalysisConfig object.

        Args:
            input: Path to the input CSV file.

            fmt: 'grid' for curves sampled on a grid or 'coef' for basis coefficients.

            n_basis: The number of Fourier basis functions D.

            mean_breaks: Indices of known breaks in the mean; curves are demeaned within the segments they define.

            d: The number of eigenvalues to test, or 'auto' to select it by the total variance explained.

            tve: The fraction of variance to explain when d is 'auto', in (0, 1).

            delta: The trimming parameter in (0, 1).

            kernel: The lag-window kernel name.

            bandwidth: The kernel bandwidth or 'auto'.

            alpha: The level of the tests.

            mc_grid: Grid points for simulating the limit distributions.

            mc_reps: Replications for simulating the limit distributions.

            seed: Seed for simulating the limit distributions.

            out: Path of the JSON report.  CSV sidecars are written next to it.

            adjust: Multiple comparison adjustment of the individual tests: 'none', 'bonferroni' or 'by'.

            grid_header: True if the first row of a grid input holds the grid points.

            n_processes: The number of processes used for simulating the limit distributions.

            cache_dir: Folder of the reference sample cache, or None to disable caching.

        Raises:
            ConfigError: If any setting is invalid.
        """
        if fmt not in FORMATS:
            raise(ConfigError('fmt must be one of ' + ', '.join(FORMATS) + '; got ' + str(fmt) + '.'))
        if n_basis < 1:
            raise(ConfigError('n_basis must be positive.'))
        if d != 'auto':
            if int(d) != d or d < 1 or d > n_basis:
                raise(ConfigError('d must be auto or an integer in 1, ..., ' + str(n_basis) + '; got ' + str(d) +
                                  '.'))
            d = int(d)
        elif not (0 < tve < 1):
            raise(ConfigError('tve must be in (0, 1); got ' + str(tve) + '.'))
        if not (0 < delta < 1):
            raise(ConfigError('delta must be in (0, 1); got ' + str(delta) + '.'))
        if not (0 < alpha < 1):
            raise(ConfigError('alpha must be in (0, 1); got ' + str(alpha) + '.'))
        if adjust not in ADJUSTMENTS:
            raise(ConfigError('adjust must be one of ' + ', '.join(ADJUSTMENTS) + '.'))
        _check_mc(mc_grid, mc_reps)

        self.input = pathlib.Path(input)
        self.fmt = fmt
        self.n_basis = int(n_basis)
        self.mean_breaks = [int(b) for b in mean_breaks] if mean_breaks is not None else []
        self.d = d
        self.tve = tve
        self.delta = delta
        self.kernel = _kernel(kernel, bandwidth)
        self.alpha = alpha
        self.mc_grid = int(mc_grid)
        self.mc_reps = int(mc_reps)
        self.seed = int(seed)
        self.out = pathlib.Path(out)
        self.adjust = adjust
        self.grid_header = grid_header
        self.n_processes = n_processes
        self.cache_dir = cache_dir

    def to_dict(self) -> dict:
        return {'input': str(self.input), 'fmt': self.fmt, 'n_basis': self.n_basis,
                'mean_breaks': list(self.mean_breaks), 'd': self.d, 'tve': self.tve, 'delta': self.delta,
                'kernel': self.kernel.kind, 'bandwidth': self.kernel.bandwidth, 'alpha': self.alpha,
                'mc_grid': self.mc_grid, 'mc_reps': self.mc_reps, 'seed': self.seed, 'out': str(self.out),
                'adjust': self.adjust, 'grid_header': self.grid_header, 'n_processes': self.n_processes,
                'cache_dir': None if self.cache_dir is None else str(self.cache_dir)}

    @classmethod
    def from_dict(cls, d: dict):
        return cls(**d)


class ExperimentConfig:
    """ Settings of a simulation study. """

    def __init__(self, settings: Sequence[int] = (0,), decays: Sequence[str] = ('slow',),
                 dependences: Sequence[str] = ('iid',), n_list: Sequence[int] = (100, 200, 500),
                 b_grid: Sequence[float] = None, taus: Sequence[float] = (.5,), n_reps: int = 1000,
                 delta: float = .1, alpha: float = .05, d: int = 3, kernel: str = 'bartlett',
                 bandwidth: Union[float, str] = 'auto', n_basis: int = 21, kappa: float = .8,
                 operator_norm: str = 'spectral', mc_grid: int = 1000, mc_reps: int = 10000, seed: int = 0,
                 n_processes: int = 1):
        """ Creates a new ExperimentConfig object.

        Args:
            settings: The settings to simulate, from 0 (null), 1, 2, 3 and 4.

            decays: The decay profiles, from 'fast' and 'slow'.

            dependences: The dependence structures, from 'iid' and 'far1'.

            n_list: The sample sizes.

            b_grid: The break sizes.  If None, the default grid of each setting is used.

            taus: The break locations as fractions of n.

            n_reps: Replications per cell.

            delta: The trimming parameter.

            alpha: The level of the tests.

            d: The number of eigenvalues for the joint test.

            kernel: The lag-window kernel name.

            bandwidth: The kernel bandwidth or 'auto'.

            n_basis: The number of basis functions of the simulated curves.

            kappa: The norm of the autoregressive operator.

            operator_norm: 'spectral' or 'frobenius'.

            mc_grid: Grid points for simulating the limit distributions.

            mc_reps: Replications for simulating the limit distributions.

            seed: The base seed of the study.

            n_processes: The number of processes to run replications on.

        Raises:
            ConfigError: If any setting is invalid.
        """
        for s in settings:
            if s not in SETTINGS:
                raise(ConfigError('Unknown setting: ' + str(s) + '.'))
        for dc in decays:
            if dc not in DECAYS:
                raise(ConfigError('Unknown decay: ' + str(dc) + '.'))
        for dp in dependences:
            if dp not in DEPENDENCES:
                raise(ConfigError('Unknown dependence: ' + str(dp) + '.'))
        if operator_norm not in OPERATOR_NORMS:
            raise(ConfigError('Unknown operator_norm: ' + str(operator_norm) + '.'))
        if any(n < 10 for n in n_list):
            raise(ConfigError('Sample sizes must be at least 10.'))
        if b_grid is not None and any(not b > 0 for b in b_grid):
            raise(ConfigError('Break sizes must be positive.'))
        if any(not (0 < t < 1) for t in taus):
            raise(ConfigError('Break locations must be in (0, 1).'))
        if n_reps < 100:
            raise(ConfigError('reps must be at least 100.'))
        if not (0 < delta < 1):
            raise(ConfigError('delta must be in (0, 1).'))
        if not (0 < alpha < 1):
            raise(ConfigError('alpha must be in (0, 1).'))
        if d < 1 or d > n_basis:
            raise(ConfigError('d must be in 1, ..., n_basis.'))
        if any(s != 0 for s in settings) and n_basis < 3:
            raise(ConfigError('Settings 1-4 need at least 3 basis functions.'))
        if not (-1 < kappa < 1):
            raise(ConfigError('kappa must be in (-1, 1).'))
        _check_mc(mc_grid, mc_reps)

        self.settings = [int(s) for s in settings]
        self.decays = list(decays)
        self.dependences = list(dependences)
        self.n_list = [int(n) for n in n_list]
        self.b_grid = None if b_grid is None else [float(b) for b in b_grid]
        self.taus = [float(t) for t in taus]
        self.n_reps = int(n_reps)
        self.delta = delta
        self.alpha = alpha
        self.d = int(d)
        self.kernel = _kernel(kernel, bandwidth)
        self.n_basis = int(n_basis)
        self.kappa = kappa
        self.operator_norm = operator_norm
        self.mc_grid = int(mc_grid)
        self.mc_reps = int(mc_reps)
        self.seed = int(seed)
        self.n_processes = n_processes

    def to_dict(self) -> dict:
        return {'settings': list(self.settings), 'decays': list(self.decays), 'dependences': list(self.dependences),
                'n_list': list(self.n_list), 'b_grid': self.b_grid, 'taus': list(self.taus), 'n_reps': self.n_reps,
                'delta': self.delta, 'alpha': self.alpha, 'd': self.d, 'kernel': self.kernel.kind,
                'bandwidth': self.kernel.bandwidth, 'n_basis': self.n_basis, 'kappa': self.kappa,
                'operator_norm': self.operator_norm, 'mc_grid': self.mc_grid, 'mc_reps': self.mc_reps,
                'seed': self.seed, 'n_processes': self.n_processes}

    @classmethod
    def from_dict(cls, d: dict):
        return cls(**d)


# ======================================================================================================================
# Parsing key = value files

def _split_list(vl: str) -> List[str]:
    return [v.strip() for v in vl.split(',') if v.strip() != '']


def _parse_setting(vl: str) -> int:
    if vl.lower() in ('null', 'none', 'null-only'):
        return 0
    return int(vl)


def _parse_bandwidth(vl: str) -> Union[str, float]:
    return vl if vl == 'auto' else float(vl)


# Maps keys of experiment files to (argument name, parser)
EXPERIMENT_KEYS = {'settings': ('settings', lambda v: [_parse_setting(s) for s in _split_list(v)]),
                   'decays': ('decays', lambda v: [s.lower() for s in _split_list(v)]),
                   'dependences': ('dependences', lambda v: [s.lower() for s in _split_list(v)]),
                   'n': ('n_list', lambda v: [int(s) for s in _split_list(v)]),
                   'b': ('b_grid', lambda v: [float(s) for s in _split_list(v)]),
                   'tau': ('taus', lambda v: [float(s) for s in _split_list(v)]),
                   'reps': ('n_reps', int),
                   'delta': ('delta', float),
                   'alpha': ('alpha', float),
                   'd': ('d', int),
                   'kernel': ('kernel', str),
                   'bandwidth': ('bandwidth', _parse_bandwidth),
                   'basis_dim': ('n_basis', int),
                   'kappa': ('kappa', float),
                   'operator_norm': ('operator_norm', str),
                   'mc_grid': ('mc_grid', int),
                   'mc_reps': ('mc_reps', int),
                   'seed': ('seed', int),
                   'processes': ('n_processes', int)}


def read_key_value_file(f: Union[str, pathlib.Path]) -> dict:
    """ Reads a flat key = value text file.

    Args:
        f: Path to the file.

    Returns:
        entries: Dictionary mapping keys to their (stripped) string values.

    Raises:
        ConfigError: If a line is malformed or a key is repeated.
    """
    entries = dict()
    with open(f, 'r') as f_h:
        for l_i, line in enumerate(f_h):
            line = line.strip()
            if line == '' or line.startswith('#'):
                continue
            if '=' not in line:
                raise(ConfigError('Line ' + str(l_i + 1) + ' of ' + str(f) + ' is not of the form key = value.'))
            key, vl = line.split('=', 1)
            key = key.strip().lower().replace('-', '_')
            if key in entries:
                raise(ConfigError('The key ' + key + ' is repeated in ' + str(f) + '.'))
            entries[key] = vl.strip()
    return entries


def load_experiment_config(f: Union[str, pathlib.Path], **overrides) -> ExperimentConfig:
    """ Loads a simulation study configuration from a key = value file.

    Args:
        f: Path to the file.

        overrides: Keyword arguments of ExperimentConfig which take precedence over the file.

    Returns:
        config: The configuration.

    Raises:
        ConfigError: If the file holds unknown keys or values that cannot be parsed or are invalid.
    """
    kwargs = dict()
    for key, vl in read_key_value_file(f).items():
        if key not in EXPERIMENT_KEYS:
            raise(ConfigError('Unknown key ' + key + ' in ' + str(f) + '.  Known keys are ' +
                              ', '.join(EXPERIMENT_KEYS) + '.'))
        arg, parser = EXPERIMENT_KEYS[key]
        try:
            kwargs[arg] = parser(vl)
        except ValueError:
            raise(ConfigError('Unable to parse the value ' + repr(vl) + ' of ' + key + '.'))
    kwargs.update(overrides)
    return ExperimentConfig(**kwargs)
