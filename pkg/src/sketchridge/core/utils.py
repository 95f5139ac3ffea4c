"""
Shared utilities for input coercion and validation.
"""

import logging
from typing import Optional, Union

import numpy as np

from ..exceptions import DimensionError, ParameterError, ValidationError

logger = logging.getLogger(__name__)

SeedLike = Union[None, int, np.random.SeedSequence, np.random.Generator]


def make_rng(seed: SeedLike) -> np.random.Generator:
    """
    Build a random generator from a seed.

    Args:
        seed: Integer seed, SeedSequence, existing Generator (returned as is) or None

    Returns:
        numpy Generator
    """
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def as_vector(v, length: Optional[int] = None, name: str = "vector") -> np.ndarray:
    """
    Coerce input to a finite float64 1-D array.

    Args:
        v: Array-like input
        length: Required length (optional)
        name: Name used in error messages

    Returns:
        float64 numpy array
    """
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {arr.shape}", expected=1, actual=arr.ndim)
    if length is not None and arr.shape[0] != length:
        raise DimensionError(f"{name} has length {arr.shape[0]}, expected {length}", expected=length, actual=arr.shape[0])
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


def as_dense(M, name: str = "matrix") -> np.ndarray:
    """
    Coerce input to a finite float64 2-D array (vectors become one column).
    """
    arr = np.asarray(M, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be two-dimensional, got shape {arr.shape}", expected=2, actual=arr.ndim)
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


def check_positive(value: float, name: str) -> float:
    """Return value as float, raising ParameterError unless it is finite and > 0."""
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise ParameterError(f"{name} must be positive, got {value}", name=name)
    return value


def check_count(value: int, name: str, minimum: int = 1) -> int:
    """Return value as int, raising ParameterError when below minimum."""
    if int(value) != value or value < minimum:
        raise ParameterError(f"{name} must be an integer >= {minimum}, got {value}", name=name)
    return int(value)
