""" Tools for simulating the limit distributions of the spectral and trace break statistics.

Three families of functionals of standard Brownian bridges B_1, ..., B_d are supported:

    J(d, delta) = sup_{delta <= x <= 1} sum_{j=1}^d B_j(x)^2

    I(delta) = sup_{delta <= x <= 1} |B(x)|

    M = sup_{0 <= x <= 1} |B(x)|

Bridges are simulated on a uniform grid of G points as B(x) = W(x) - x W(1) from scaled Gaussian increments.  The
supremum of a discretely monitored path underestimates the supremum of the continuous path.  Break statistics are
themselves maxima over a discrete grid, so they are compared to uncorrected samples.  Samples approximating the
continuous functionals can be requested with a correction which shifts the discrete supremum of |B| (or of the
Euclidean norm of (B_1, ..., B_d)) by beta/sqrt(G) with beta = -zeta(1/2)/sqrt(2*pi) ~ 0.5826 (zeta is the Riemann
zeta function).

Replications are simulated in blocks of a fixed size.  Block b draws from a random stream seeded by (seed, b), so a
reference sample only depends on its specification and not on how blocks are scheduled over processes.
"""

import hashlib
import math
import pathlib
from typing import Tuple, Union

import numpy as np
import scipy.special

from spectral_breaks.errors import InvalidArgumentError
from spectral_breaks.utils.data_saving import load_structured_hdf5, save_structured_hdf5
from spectral_breaks.utils.parallel import pooled_map

FAMILIES = ('J', 'I', 'M')

MIN_GRID_PTS = 100
MIN_REPS = 1000

# Number of replications drawn from each random stream
REPS_PER_BLOCK = 250

# Shift applied to discretely monitored suprema of Brownian paths
CONTINUITY_BETA = -scipy.special.zeta(.5)/math.sqrt(2*math.pi)

DEFAULT_CACHE_DIR = pathlib.Path.home() / '.cache' / 'spectral_breaks'


class LimitDistSpec:
    """ Specifies a Monte-Carlo approximation to one of the limit distributions J, I or M. """

    def __init__(self, family: str, n_dims: int = 1, delta: float = 0.0, n_grid_pts: int = 1000,
                 n_reps: int = 10000, seed: int = 0, continuity_correction: bool = False):
        """ Creates a new LimitDistSpec object.

        Args:
            family: One of 'J', 'I' or 'M'.

            n_dims: The number of bridges d (family J only; set to 1 for the other families).

            delta: The trimming parameter in [0, 1) (families J and I; set to 0 for family M).

            n_grid_pts: The number of grid points G bridges are simulated on.  At least 100.

            n_reps: The number of replications R.  At least 1000.

            seed: Seed for the random streams.

            continuity_correction: True if discretely monitored suprema should be corrected toward the continuous
            supremum (see module docstring).  Leave False for references of break statistics.

        Raises:
            InvalidArgumentError: If any field is invalid.
        """
        if family not in FAMILIES:
            raise(InvalidArgumentError('family must be one of J, I or M; got ' + str(family) + '.'))
        if family != 'J':
            n_dims = 1
        if family == 'M':
            delta = 0.0
        if int(n_dims) != n_dims or n_dims < 1:
            raise(InvalidArgumentError('n_dims must be a positive integer.'))
        if not (0 <= delta < 1):
            raise(InvalidArgumentError('delta must be in [0, 1); got ' + str(delta) + '.'))
        if n_grid_pts < MIN_GRID_PTS:
            raise(InvalidArgumentError('n_grid_pts must be at least ' + str(MIN_GRID_PTS) + '.'))
        if n_reps < MIN_REPS:
            raise(InvalidArgumentError('n_reps must be at least ' + str(MIN_REPS) + '.'))
        if int(seed) != seed or seed < 0 or seed >= 2**64:
            raise(InvalidArgumentError('seed must be an integer in [0, 2^64).'))

        self.family = family
        self.n_dims = int(n_dims)
        self.delta = float(delta)
        self.n_grid_pts = int(n_grid_pts)
        self.n_reps = int(n_reps)
        self.seed = int(seed)
        self.continuity_correction = bool(continuity_correction)

    def __repr__(self) -> str:
        return 'LimitDistSpec(' + ', '.join(k + '=' + repr(v) for k, v in self.to_dict().items()) + ')'

    def to_dict(self) -> dict:
        return {'family': self.family, 'n_dims': self.n_dims, 'delta': self.delta, 'n_grid_pts': self.n_grid_pts,
                'n_reps': self.n_reps, 'seed': self.seed, 'continuity_correction': self.continuity_correction}

    @classmethod
    def from_dict(cls, d: dict):
        return cls(**d)

    def key(self) -> str:
        """ Returns a string uniquely identifying the reference sample this specification produces. """
        return (self.family + '_d' + str(self.n_dims) + '_delta' + repr(self.delta) + '_G' + str(self.n_grid_pts) +
                '_R' + str(self.n_reps) + '_seed' + str(self.seed) + '_cc' + str(int(self.continuity_correction)))


def _simulate_block(spec: LimitDistSpec, block_i: int, n_block_reps: int) -> np.ndarray:
    """ Simulates n_block_reps replications of a limit functional from the stream seeded by (seed, block_i). """

    rng = np.random.default_rng(np.random.SeedSequence([spec.seed, block_i]))

    n_grid_pts = spec.n_grid_pts
    incs = rng.standard_normal([n_block_reps, spec.n_dims, n_grid_pts])/math.sqrt(n_grid_pts)
    w = np.cumsum(incs, axis=-1)

    x = np.arange(1, n_grid_pts + 1)/n_grid_pts
    bridges = w - x*w[:, :, -1:]

    keep = x >= spec.delta - 1e-12
    norms = np.sqrt(np.sum(bridges[:, :, keep]**2, axis=1))
    sups = np.max(norms, axis=1)

    if spec.continuity_correction:
        sups = sups + CONTINUITY_BETA/math.sqrt(n_grid_pts)

    if spec.family == 'J':
        sups = sups**2

    return sups


def _simulate_block_arg_unpack(args):
    return _simulate_block(*args)


def simulate_limit_sample(spec: LimitDistSpec, n_processes: int = 1, verbose: bool = False) -> np.ndarray:
    """ Simulates a sorted reference sample of a limit distribution.

    Args:
        spec: The limit distribution specification.

        n_processes: The number of processes to simulate blocks with.

        verbose: True if a progress bar should be shown.

    Returns:
        sample: The sorted sample of length spec.n_reps.
    """
    n_blocks = int(math.ceil(spec.n_reps/REPS_PER_BLOCK))
    jobs = [(spec, b_i, min(REPS_PER_BLOCK, spec.n_reps - b_i*REPS_PER_BLOCK)) for b_i in range(n_blocks)]
    blocks = pooled_map(_simulate_block_arg_unpack, jobs, n_processes=n_processes, verbose=verbose,
                        desc='Simulating ' + spec.family)
    return np.sort(np.concatenate(blocks))


def _cache_file(spec: LimitDistSpec, cache_dir: Union[str, pathlib.Path]) -> pathlib.Path:
    digest = hashlib.sha256(spec.key().encode()).hexdigest()[:20]
    return pathlib.Path(cache_dir) / ('limit_' + spec.family + '_' + digest + '.h5')


def _load_cached_sample(spec: LimitDistSpec, f: pathlib.Path) -> np.ndarray:
    """ Loads a cached sample, returning None if it is missing, unreadable or does not match spec. """
    if not f.exists():
        return None
    try:
        cached = load_structured_hdf5(f)
        sample = np.asarray(cached['sample'], dtype=float)
        matches = (cached['key'] == spec.key()) and (cached['spec'] == spec.to_dict())
    except (OSError, KeyError, ValueError, TypeError, IndexError):
        return None

    if (not matches) or (sample.shape != (spec.n_reps,)) or (not np.all(np.isfinite(sample))) or \
            np.any(np.diff(sample) < 0):
        return None
    return sample


def reference_sample(spec: LimitDistSpec, cache_dir: Union[str, pathlib.Path] = None, n_processes: int = 1,
                     verbose: bool = False) -> Tuple[np.ndarray, bool]:
    """ Returns the sorted reference sample for a specification, using an on-disk cache if requested.

    Args:
        spec: The limit distribution specification.

        cache_dir: Folder of the cache.  If None, no cache is used.  A cache entry which cannot be read or does not
        match spec is recomputed and overwritten.

        n_processes: The number of processes to simulate with.

        verbose: True if progress should be shown.

    Returns:
        sample: The sorted sample of length spec.n_reps.

        cache_hit: True if the sample was loaded from the cache.
    """
    f = None
    if cache_dir is not None:
        f = _cache_file(spec, cache_dir)
        sample = _load_cached_sample(spec, f)
        if sample is not None:
            return sample, True

    sample = simulate_limit_sample(spec, n_processes=n_processes, verbose=verbose)

    if f is not None:
        f.parent.mkdir(parents=True, exist_ok=True)
        save_structured_hdf5({'key': spec.key(), 'spec': spec.to_dict(), 'sample': sample}, f, 'reference',
                             overwrite=True)

    return sample, False


def critical_value(sample: np.ndarray, alpha: float) -> float:
    """ Returns the critical value of a sorted reference sample at level alpha.

    The critical value is the order statistic q for which statistic > q holds exactly when
    p_value(statistic, sample) < alpha.

    Args:
        sample: A sorted reference sample.

        alpha: The level in (0, 1).

    Returns:
        q: The critical value, approximately the (1 - alpha) quantile.

    Raises:
        InvalidArgumentError: If alpha is not in (0, 1).
    """
    if not (0 < alpha < 1):
        raise(InvalidArgumentError('alpha must be in (0, 1); got ' + str(alpha) + '.'))
    n_smps = len(sample)
    n_above = int(math.ceil(round(alpha*n_smps, 9))) - 1
    return float(sample[n_smps - n_above - 1])


def p_value(statistic: float, sample: np.ndarray) -> float:
    """ Returns the fraction of a sorted reference sample which is greater than or equal to statistic. """
    n_smps = len(sample)
    return (n_smps - int(np.searchsorted(sample, statistic, side='left')))/n_smps


def limit_quantile(spec: LimitDistSpec, alpha: float, cache_dir: Union[str, pathlib.Path] = None,
                   n_processes: int = 1, verbose: bool = False) -> Tuple[float, np.ndarray]:
    """ Computes the (1 - alpha) quantile of a limit distribution by Monte-Carlo simulation.

    Args:
        spec: The limit distribution specification.

        alpha: The level in (0, 1).

        cache_dir: Folder of the reference sample cache.  If None, no cache is used.

        n_processes: The number of processes to simulate with.

        verbose: True if progress should be shown.

    Returns:
        quantile: The critical value at level alpha (see critical_value).

        sample: The sorted reference sample, for computing p-values.
    """
    if not (0 < alpha < 1):
        raise(InvalidArgumentError('alpha must be in (0, 1); got ' + str(alpha) + '.'))
    sample, _ = reference_sample(spec, cache_dir=cache_dir, n_processes=n_processes, verbose=verbose)
    return critical_value(sample, alpha), sample
