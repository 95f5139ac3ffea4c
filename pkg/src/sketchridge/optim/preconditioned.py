"""
Preconditioned ridge decomposition L~(w) = L(P^{-1/2} w).

Components are l~_i(w) = ((n+d)/n) 1/2 (w^T x~_i - y_i)^2 with x~_i = P^{-1/2} x_i
and l~_{n+j}(w) = lambda (n+d) 1/2 (w^T b_j)^2 with b_j = P^{-1/2} e_j.

Two application modes:

* dense: every x~_i is materialized once (n x d floats).
* lazy: data stay in their original storage; s_i = U^T x_i is cached and the
  inner loop keeps the iterate as w = w_part + U y together with z = U^T w,
  so a step costs O(nnz(x_i) + d + k).

The vectors b_j are never materialized in either mode.
"""

import logging
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np

from ..config import SketchRidgeConfig
from ..core.precond import Preconditioner
from ..exceptions import DimensionError, ScaleGuardError
from .base_problem import FiniteSumProblem
from .ridge import RidgeProblem

logger = logging.getLogger(__name__)


class ApplicationMode(str, Enum):
    DENSE = "dense"
    LAZY = "lazy"
    AUTO = "auto"


def resolve_mode(mode: Union[str, ApplicationMode], n: int, d: int) -> ApplicationMode:
    """Pick dense or lazy application; auto chooses dense below the entry limit."""
    mode = ApplicationMode(mode)
    limit = SketchRidgeConfig.get_dense_entry_limit()
    entries = n * d
    if mode is ApplicationMode.AUTO:
        return ApplicationMode.DENSE if entries <= limit else ApplicationMode.LAZY
    if mode is ApplicationMode.DENSE and entries > limit:
        raise ScaleGuardError(
            f"Dense preconditioned features need {entries} entries (limit {limit}); use lazy mode",
            limit=limit, requested=entries,
        )
    return mode


class PreconditionedComponents(FiniteSumProblem):
    """The (n + d)-component decomposition of L~ for a structured preconditioner."""

    def __init__(
        self,
        problem: RidgeProblem,
        preconditioner: Preconditioner,
        mode: Union[str, ApplicationMode] = ApplicationMode.AUTO,
        strong_convexity: Optional[float] = None,
    ):
        """
        Initialize the preconditioned decomposition.

        Args:
            problem: Ridge problem in original coordinates
            preconditioner: P^{-1/2} of matching dimension
            mode: dense, lazy or auto
            strong_convexity: Override for alpha; defaults to lambda * lambda_min(P^{-1})
        """
        n, d = problem.n_samples, problem.n_features
        if preconditioner.dimension != d:
            raise DimensionError("Preconditioner dimension does not match the problem",
                                 expected=d, actual=preconditioner.dimension)
        N = n + d
        self.problem = problem
        self.preconditioner = preconditioner
        self.mode = resolve_mode(mode, n, d)
        self._data_weight = N / n
        self._reg_weight = problem.lam * N
        self._basis = preconditioner.basis
        self._tail = preconditioner.tail_coeff
        self._shift = preconditioner.inv_sqrt_diag - preconditioner.tail_coeff

        # s_i = U^T x_i, one row per data point
        if preconditioner.rank:
            self.projections = np.ascontiguousarray(problem.data.rmatmat(self._basis))
        else:
            self.projections = np.zeros((n, 0))
        self.basis_rows = np.ascontiguousarray(self._basis)

        feature_norms_sq = preconditioner.inv_sqrt_norms_sq(problem.data.column_norms() ** 2, self.projections)
        reg_norms_sq = preconditioner.inv_sqrt_norms_sq(np.ones(d), self.basis_rows)
        betas = np.concatenate([self._data_weight * feature_norms_sq, self._reg_weight * reg_norms_sq])
        betas = np.maximum(betas, np.finfo(float).tiny)
        if strong_convexity is None:
            strong_convexity = problem.lam * preconditioner.min_inv_sqrt ** 2
        super().__init__(n_components=N, dimension=d, betas=betas, strong_convexity=strong_convexity)

        self.features: Optional[np.ndarray] = None
        if self.mode is ApplicationMode.DENSE:
            self.features = np.ascontiguousarray(self._inv_sqrt(problem.data.to_dense()).T)
        self.last_projection_drift: Optional[float] = None
        logger.info("Preconditioned components: N=%d mode=%s beta_hat=%.4g alpha=%.4g",
                    N, self.mode.value, self.beta_hat, self.strong_convexity)

    def _inv_sqrt(self, v: np.ndarray) -> np.ndarray:
        if self._basis.shape[1] == 0:
            return self._tail * v
        proj = self._basis.T @ v
        if v.ndim == 1:
            return self._tail * v + self._basis @ (self._shift * proj)
        return self._tail * v + self._basis @ (self._shift[:, None] * proj)

    def to_original(self, w: np.ndarray) -> np.ndarray:
        """Map a preconditioned point back to original coordinates: P^{-1/2} w."""
        return self._inv_sqrt(np.asarray(w, dtype=np.float64))

    def objective(self, w: np.ndarray) -> float:
        return self.problem.value(self._inv_sqrt(w))

    def full_gradient(self, w: np.ndarray) -> np.ndarray:
        return self._inv_sqrt(self.problem.gradient(self._inv_sqrt(w)))

    def feature_vector(self, i: int) -> np.ndarray:
        """x~_i for i < n, b_{i-n} otherwise, as a dense d-vector."""
        n = self.problem.n_samples
        if i < n:
            if self.features is not None:
                return self.features[i].copy()
            vec = self._tail * self.problem.data.column(i)
            return vec + self._basis @ (self._shift * self.projections[i])
        j = i - n
        vec = self._basis @ (self._shift * self.basis_rows[j])
        vec[j] += self._tail
        return vec

    def feature_dot(self, i: int, w: np.ndarray, z: Optional[np.ndarray] = None) -> float:
        """w^T x~_i (or w^T b_{i-n}) using z = U^T w."""
        n = self.problem.n_samples
        if i < n and self.features is not None:
            return float(self.features[i] @ w)
        if z is None:
            z = self._basis.T @ w
        if i < n:
            indices, values = self.problem.data.column_support(i)
            return float(self._tail * (values @ w[indices]) + z @ (self._shift * self.projections[i]))
        j = i - n
        return float(self._tail * w[j] + z @ (self._shift * self.basis_rows[j]))

    def component_gradient(self, i: int, w: np.ndarray) -> np.ndarray:
        n = self.problem.n_samples
        if i < n:
            coef = self._data_weight * (self.feature_dot(i, w) - self.problem.labels[i])
        else:
            coef = self._reg_weight * self.feature_dot(i, w)
        return coef * self.feature_vector(i)

    def run_inner_loop(
        self,
        w_bar: np.ndarray,
        v_bar: np.ndarray,
        step_size: float,
        indices: Sequence[int],
        divisors: Sequence[float],
    ) -> np.ndarray:
        if self.mode is ApplicationMode.DENSE:
            return super().run_inner_loop(w_bar, v_bar, step_size, indices, divisors)
        return self._run_lazy_inner_loop(w_bar, v_bar, step_size, indices, divisors)

    def _run_lazy_inner_loop(
        self,
        w_bar: np.ndarray,
        v_bar: np.ndarray,
        eta: float,
        indices: Sequence[int],
        divisors: Sequence[float],
    ) -> np.ndarray:
        data = self.problem.data
        n = self.problem.n_samples
        U, c, shift = self._basis, self._tail, self._shift
        inv = shift + c
        k = U.shape[1]

        # snapshot scalars w_bar^T x~_i and w_bar^T b_j
        snapshot_point = self._inv_sqrt(w_bar)
        snap_data = data.rmatvec(snapshot_point)
        snap_reg = snapshot_point

        w_part = w_bar.copy()
        y = np.zeros(k)
        z = U.T @ w_bar  # refreshed at every snapshot
        z_vbar = U.T @ v_bar
        sum_part = np.zeros_like(w_part)
        sum_y = np.zeros(k)

        for i, divisor in zip(indices, divisors):
            if i < n:
                support, values = data.column_support(i)
                s_i = self.projections[i]
                shifted = shift * s_i
                current = c * (values @ w_part[support] + y @ s_i) + z @ shifted
                coef = self._data_weight * (current - snap_data[i]) / divisor
                w_part -= eta * v_bar
                w_part[support] -= eta * coef * c * values
                y -= eta * coef * shifted
                z -= eta * (coef * (inv * s_i) + z_vbar)
            else:
                j = i - n
                r_j = self.basis_rows[j]
                shifted = shift * r_j
                current = c * (w_part[j] + y @ r_j) + z @ shifted
                coef = self._reg_weight * (current - snap_reg[j]) / divisor
                w_part -= eta * v_bar
                w_part[j] -= eta * coef * c
                y -= eta * coef * shifted
                z -= eta * (coef * (inv * r_j) + z_vbar)
            sum_part += w_part
            sum_y += y

        w_last = w_part + U @ y
        self.last_projection_drift = float(np.linalg.norm(z - U.T @ w_last))
        return (sum_part + U @ sum_y) / len(indices)


def preconditioned_components(
    p: RidgeProblem,
    P: Preconditioner,
    mode: Union[str, ApplicationMode] = ApplicationMode.AUTO,
    strong_convexity: Optional[float] = None,
) -> PreconditionedComponents:
    """Finite-sum view of L~(w) = L(P^{-1/2} w) with N = n + d components."""
    return PreconditionedComponents(p, P, mode=mode, strong_convexity=strong_convexity)
