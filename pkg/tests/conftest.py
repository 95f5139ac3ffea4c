"""
Global test configuration for pytest.
"""
import os
import sys

import numpy as np
import pytest

# Add src directory to Python path for all tests
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from sketchridge.config import SketchRidgeConfig  # noqa: E402

from tests.test_utils import random_problem  # noqa: E402


@pytest.fixture(autouse=True)
def reset_config_log_state():
    """Let each test observe the once-per-setting debug log afresh."""
    SketchRidgeConfig._logged.clear()
    yield
    SketchRidgeConfig._logged.clear()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_problem():
    """Dense 8 x 20 ridge problem with lambda = 0.1."""
    return random_problem(d=8, n=20, lam=0.1, seed=7)


@pytest.fixture
def sparse_problem():
    """Sparse 30 x 60 ridge problem (density 0.2) with lambda = 0.01."""
    return random_problem(d=30, n=60, lam=0.01, seed=11, density=0.2)
