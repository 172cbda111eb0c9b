"""
Shared fixtures for the cylquant test suite
"""

import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import numpy as np
import pytest

from src.phase import NumberStateVector
from src.quadrature import GaussLegendreQuadrature
from src.quantizer import WeylQuantizer
from src.utils import load_config


@pytest.fixture(scope='session')
def config():
    return load_config()


@pytest.fixture
def rng():
    return np.random.default_rng(20240101)


@pytest.fixture(scope='session')
def quadrature(config):
    return GaussLegendreQuadrature(config)


@pytest.fixture
def make_quantizer(config):
    def factory(N, hbar=1.0):
        return WeylQuantizer(config, N=N, hbar=hbar)
    return factory


@pytest.fixture
def two_level_state():
    """(|0> + |1>)/sqrt 2 in the number basis"""
    return NumberStateVector.from_coefficients([1.0, 1.0], normalize=True)


@pytest.fixture
def random_state(rng):
    """Factory of random unit-norm number states on [0, s]"""
    def factory(s):
        coefficients = rng.standard_normal(s + 1) + 1j * rng.standard_normal(s + 1)
        return NumberStateVector.from_coefficients(coefficients, normalize=True)
    return factory
