"""
Synthetic ridge instances with a prescribed singular-value decay.

The generated matrix is d x n with d <= n: its left singular vectors live in
feature space and the right ones in sample space. Columns are normalized to
unit norm after the spectral construction, so the realized spectrum is close
to, but not exactly, the requested decay.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ..core.linalg import orthonormalize
from ..core.matrix import DataMatrix, gaussian_matrix
from ..core.utils import SeedLike, as_vector, check_count, make_rng
from ..exceptions import DimensionError, ParameterError
from ..optim.ridge import RidgeProblem

logger = logging.getLogger(__name__)


class Decay(str, Enum):
    LINEAR = "linear"
    QUADRATIC = "quadratic"


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters of a synthetic instance."""

    n: int
    d: int
    decay: Decay = Decay.LINEAR
    noise_std: float = 0.1
    seed: SeedLike = None

    def __post_init__(self):
        check_count(self.n, "n")
        check_count(self.d, "d")
        if self.d > self.n:
            raise ParameterError(f"Synthetic generator needs d <= n, got d={self.d}, n={self.n}", name="d")
        object.__setattr__(self, "decay", Decay(self.decay))
        if not np.isfinite(self.noise_std) or self.noise_std < 0:
            raise ParameterError(f"noise_std must be >= 0, got {self.noise_std}", name="noise_std")

    def singular_values(self) -> np.ndarray:
        q = np.arange(1, self.d + 1, dtype=np.float64)
        return 1.0 / q if self.decay is Decay.LINEAR else 1.0 / q**2


@dataclass
class LabeledDataset:
    """Data matrix with one label per column."""

    data: DataMatrix
    labels: np.ndarray
    provenance: Union[SyntheticSpec, Path, str, None] = field(default=None)

    def __post_init__(self):
        self.labels = as_vector(self.labels, length=self.data.n_samples, name="labels")

    @property
    def n_samples(self) -> int:
        return self.data.n_samples

    @property
    def n_features(self) -> int:
        return self.data.n_features

    def to_problem(self, lam: float) -> RidgeProblem:
        return RidgeProblem(self.data, self.labels, lam)


def spectrum_matrix(spec: SyntheticSpec, rng: SeedLike = None) -> np.ndarray:
    """
    Build U diag(sigma) V^T before column normalization.

    Args:
        spec: Synthetic parameters (n, d, decay)
        rng: Generator or seed used for the Gaussian draws

    Returns:
        Column-major d x n array whose singular values follow spec.decay
    """
    rng = make_rng(rng)
    U = orthonormalize(gaussian_matrix(spec.d, spec.d, rng))
    V = orthonormalize(gaussian_matrix(spec.n, spec.d, rng))
    if U.shape[1] != spec.d or V.shape[1] != spec.d:
        raise DimensionError("Gaussian draw was numerically rank deficient",
                             expected=spec.d, actual=(U.shape[1], V.shape[1]))
    return np.asfortranarray((U * spec.singular_values()) @ V.T)


def generate_synthetic(spec: SyntheticSpec, true_weights: Optional[np.ndarray] = None) -> LabeledDataset:
    """
    Generate a labeled synthetic instance.

    Args:
        spec: Synthetic parameters
        true_weights: Fixed w* instead of a standard-normal draw

    Returns:
        LabeledDataset with unit-norm columns and y_i = w*^T x_i + z_i
    """
    rng = make_rng(spec.seed)
    X = spectrum_matrix(spec, rng)
    X /= np.linalg.norm(X, axis=0)

    if true_weights is None:
        w_star = rng.standard_normal(spec.d)
    else:
        w_star = as_vector(true_weights, length=spec.d, name="true_weights")
    labels = X.T @ w_star
    if spec.noise_std > 0:
        labels = labels + spec.noise_std * rng.standard_normal(spec.n)

    logger.info("Generated synthetic %s-decay instance: d=%d, n=%d", spec.decay.value, spec.d, spec.n)
    return LabeledDataset(DataMatrix(X), labels, provenance=spec)
