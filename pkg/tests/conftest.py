""" Shared fixtures and options for the test suite. """

import numpy as np
import pytest

from spectral_breaks.fda.basis import FunctionalSeries, fourier_basis
from spectral_breaks.stats.breaktest import reference_samples


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help='run slow Monte-Carlo tests')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow to run')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def two_curve_series():
    """ The series X_1 = (1), X_2 = (-1) in a one function basis. """
    return FunctionalSeries(np.array([[1.0], [-1.0]]), fourier_basis(1))


@pytest.fixture
def random_series():
    """ A series of 60 independent curves with 5 basis functions and decaying variances. """
    rng = np.random.default_rng(3)
    coefs = rng.standard_normal([60, 5])*np.array([1.0, .7, .5, .3, .2])
    return FunctionalSeries(coefs, fourier_basis(5))


@pytest.fixture(scope='session')
def small_references():
    """ Small reference samples of the limit distributions for d = 3 and delta = .1. """
    return reference_samples(3, .1, n_grid_pts=200, n_reps=2000, seed=11)
