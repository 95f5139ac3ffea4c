"""
Test utilities: environment patching and random problem builders.
"""
import os
from contextlib import contextmanager
from typing import Dict, Generator, Optional

import numpy as np
from scipy import sparse

from sketchridge.core.matrix import DataMatrix
from sketchridge.optim.ridge import RidgeProblem


@contextmanager
def mock_env_vars(env_vars: Dict[str, str]) -> Generator[None, None, None]:
    """
    Temporarily set environment variables for testing.

    Args:
        env_vars: Dictionary of environment variables to set.

    Yields:
        None
    """
    original_env = {}
    for key, value in env_vars.items():
        if key in os.environ:
            original_env[key] = os.environ[key]
        os.environ[key] = value

    try:
        yield
    finally:
        for key in env_vars:
            if key in original_env:
                os.environ[key] = original_env[key]
            else:
                del os.environ[key]


def random_data(d: int, n: int, seed: int = 0, density: Optional[float] = None) -> DataMatrix:
    """Gaussian dense data, or sparse data with the given density."""
    rng = np.random.default_rng(seed)
    if density is None:
        return DataMatrix(rng.standard_normal((d, n)))
    return DataMatrix(sparse.random(d, n, density=density, format="csc", random_state=rng,
                                    data_rvs=rng.standard_normal))


def decaying_data(d: int, n: int, seed: int = 0, power: float = 1.0) -> DataMatrix:
    """d x n matrix with singular values 1/q^power and random singular vectors."""
    rng = np.random.default_rng(seed)
    U, _ = np.linalg.qr(rng.standard_normal((d, d)))
    V, _ = np.linalg.qr(rng.standard_normal((n, d)))
    sigma = 1.0 / np.arange(1, d + 1) ** power
    return DataMatrix((U * sigma) @ V.T)


def random_problem(d: int, n: int, lam: float, seed: int = 0, density: Optional[float] = None) -> RidgeProblem:
    """Ridge problem on random_data with standard-normal labels."""
    data = random_data(d, n, seed=seed, density=density)
    labels = np.random.default_rng(seed + 1).standard_normal(n)
    return RidgeProblem(data, labels, lam)
