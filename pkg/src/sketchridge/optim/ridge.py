"""
Ridge regression objective and its (n + d)-component decomposition.

    L(w) = (1/n) sum_i 1/2 (w^T x_i - y_i)^2 + (lambda/2) ||w||^2
         = (1/(n+d)) sum_{i=1}^{n+d} l_i(w)

with l_i(w) = ((n+d)/n) 1/2 (w^T x_i - y_i)^2 for data points and
l_{n+j}(w) = lambda (n+d) 1/2 (w^T e_j)^2 for coordinates.
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..core.matrix import DataMatrix
from ..core.utils import as_vector, check_positive
from ..exceptions import DimensionError
from .base_problem import FiniteSumProblem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RidgeProblem:
    """Data matrix X (d x n, columns x_i), labels y and regularization lambda."""

    data: DataMatrix
    labels: np.ndarray
    lam: float

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.float64).ravel()
        if labels.shape[0] != self.data.n_samples:
            raise DimensionError(f"Got {labels.shape[0]} labels for {self.data.n_samples} points",
                                 expected=self.data.n_samples, actual=labels.shape[0])
        object.__setattr__(self, "labels", as_vector(labels, name="labels"))
        object.__setattr__(self, "lam", check_positive(self.lam, "lambda"))

    @property
    def n_samples(self) -> int:
        return self.data.n_samples

    @property
    def n_features(self) -> int:
        return self.data.n_features

    def correlation_rhs(self) -> np.ndarray:
        """(1/n) sum_i y_i x_i."""
        return self.data.matvec(self.labels) / self.n_samples

    def value(self, w: np.ndarray) -> float:
        residual = self.data.rmatvec(w) - self.labels
        return float(0.5 * residual @ residual / self.n_samples + 0.5 * self.lam * (w @ w))

    def gradient(self, w: np.ndarray) -> np.ndarray:
        residual = self.data.rmatvec(w) - self.labels
        return self.data.matvec(residual) / self.n_samples + self.lam * w


def objective(p: RidgeProblem, w) -> float:
    """Ridge objective L(w)."""
    return p.value(as_vector(w, p.n_features, name="w"))


class RidgeComponents(FiniteSumProblem):
    """The (n + d)-component decomposition of a ridge problem."""

    def __init__(self, problem: RidgeProblem):
        """
        Initialize the decomposition.

        Args:
            problem: Ridge problem to decompose
        """
        n, d = problem.n_samples, problem.n_features
        N = n + d
        self.problem = problem
        self._data_weight = N / n
        self._reg_weight = problem.lam * N
        betas = np.concatenate([
            self._data_weight * problem.data.column_norms() ** 2,
            np.full(d, self._reg_weight),
        ])
        # zero columns give beta = 0; keep them sampleable with a floor
        betas = np.maximum(betas, np.finfo(float).tiny)
        super().__init__(n_components=N, dimension=d, betas=betas, strong_convexity=problem.lam)

    def component_gradient(self, i: int, w: np.ndarray) -> np.ndarray:
        n = self.problem.n_samples
        if i < n:
            indices, values = self.problem.data.column_support(i)
            coef = self._data_weight * (values @ w[indices] - self.problem.labels[i])
            grad = np.zeros(self.dimension)
            grad[indices] = coef * values
            return grad
        j = i - n
        grad = np.zeros(self.dimension)
        grad[j] = self._reg_weight * w[j]
        return grad

    def full_gradient(self, w: np.ndarray) -> np.ndarray:
        return self.problem.gradient(w)

    def objective(self, w: np.ndarray) -> float:
        return self.problem.value(w)

    def component_value(self, i: int, w: np.ndarray) -> float:
        """l_i(w)."""
        n = self.problem.n_samples
        if i < n:
            indices, values = self.problem.data.column_support(i)
            return 0.5 * self._data_weight * float(values @ w[indices] - self.problem.labels[i]) ** 2
        return 0.5 * self._reg_weight * float(w[i - n]) ** 2


def ridge_components(p: RidgeProblem) -> RidgeComponents:
    """Finite-sum view of a ridge problem with N = n + d components."""
    components = RidgeComponents(p)
    logger.debug("Ridge components: N=%d beta_hat=%.4g alpha=%.4g",
                 components.n_components, components.beta_hat, components.strong_convexity)
    return components
