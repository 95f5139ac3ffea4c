"""
SVRG with smoothness-weighted component sampling.
"""

import logging
import math
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterator, List, Optional, Tuple

import numpy as np

from ..config import SketchRidgeConfig
from ..core.utils import SeedLike, as_vector, check_count, check_positive, make_rng
from ..exceptions import DivergenceError, ParameterError, ValidationError
from .base_problem import FiniteSumProblem

logger = logging.getLogger(__name__)


class SvrgMode(str, Enum):
    THEORETICAL = "theoretical"
    TUNED = "tuned"


@dataclass(frozen=True)
class SvrgConfig:
    """
    SVRG parameters.

    ``epoch_length`` and ``step_size`` may be left unset and resolved against a
    problem: theoretical mode uses m = ceil(beta_hat / alpha) and
    eta = 0.1 / beta_hat, tuned mode uses m = 2N and requires eta.
    """

    epochs: int
    epoch_length: Optional[int] = None
    step_size: Optional[float] = None
    seed: SeedLike = None
    mode: SvrgMode = SvrgMode.THEORETICAL

    def __post_init__(self):
        check_count(self.epochs, "epochs")
        if self.epoch_length is not None:
            check_count(self.epoch_length, "epoch_length")
        if self.step_size is not None:
            check_positive(self.step_size, "step_size")
        object.__setattr__(self, "mode", SvrgMode(self.mode))

    def resolve(self, problem: FiniteSumProblem) -> "SvrgConfig":
        """Fill in unset parameters for the given problem."""
        epoch_length = self.epoch_length
        step_size = self.step_size
        if self.mode is SvrgMode.THEORETICAL:
            if epoch_length is None:
                epoch_length = max(1, math.ceil(problem.average_condition_number))
            if step_size is None:
                step_size = 0.1 / problem.beta_hat
        else:
            if epoch_length is None:
                epoch_length = 2 * problem.n_components
            if step_size is None:
                raise ParameterError("Tuned mode needs an explicit step size", name="step_size")
        return replace(self, epoch_length=epoch_length, step_size=step_size)


@dataclass(frozen=True)
class TraceRecord:
    epoch: int
    objective: float
    suboptimality: Optional[float]
    elapsed_seconds: float


@dataclass
class ConvergenceTrace:
    """Per-epoch objective, suboptimality and wall-clock records."""

    records: List[TraceRecord] = field(default_factory=list)

    def append(self, epoch: int, objective: float, suboptimality: Optional[float], elapsed_seconds: float) -> None:
        if self.records and epoch <= self.records[-1].epoch:
            raise ValidationError(f"Epoch {epoch} does not follow epoch {self.records[-1].epoch}")
        self.records.append(TraceRecord(epoch, float(objective), suboptimality, float(elapsed_seconds)))

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[TraceRecord]:
        return iter(self.records)

    @property
    def objectives(self) -> np.ndarray:
        return np.array([r.objective for r in self.records])

    @property
    def suboptimalities(self) -> np.ndarray:
        return np.array([np.nan if r.suboptimality is None else r.suboptimality for r in self.records])

    @property
    def final(self) -> Optional[TraceRecord]:
        return self.records[-1] if self.records else None


def validate_cumulative_weights(cumulative_weights) -> np.ndarray:
    """Return the table as an array, raising ValidationError when malformed."""
    table = np.asarray(cumulative_weights, dtype=np.float64)
    if table.ndim != 1 or table.size == 0:
        raise ValidationError("Sampling table must be a non-empty vector")
    if not np.all(np.isfinite(table)) or table[0] < 0 or np.any(np.diff(table) < 0):
        raise ValidationError("Sampling table must be finite, non-negative and non-decreasing")
    if abs(table[-1] - 1.0) > 1e-12:
        raise ValidationError(f"Sampling table must end at 1, ends at {table[-1]!r}")
    return table


def sample_index(cumulative_weights, u: float) -> int:
    """Smallest index whose cumulative weight is >= u."""
    table = validate_cumulative_weights(cumulative_weights)
    if not 0.0 <= u <= 1.0:
        raise ValidationError(f"u must lie in [0, 1], got {u}")
    return int(min(np.searchsorted(table, u, side="left"), table.size - 1))


def sample_indices(cumulative_weights: np.ndarray, us: np.ndarray) -> np.ndarray:
    """Vectorized sample_index over many uniforms (table assumed valid)."""
    return np.minimum(np.searchsorted(cumulative_weights, us, side="left"), cumulative_weights.size - 1)


def theoretical_params(
    problem: FiniteSumProblem, w0_gap: float, epsilon: float, seed: SeedLike = None
) -> SvrgConfig:
    """
    Parameters guaranteeing an epsilon-approximate minimizer.

    Args:
        problem: Finite-sum problem
        w0_gap: F(w0) - min F (or an upper bound)
        epsilon: Target accuracy

    Returns:
        SvrgConfig with S = ceil(log(w0_gap / epsilon)) (at least 1),
        m = ceil(beta_hat / alpha) and eta = 0.1 / beta_hat
    """
    check_positive(w0_gap, "w0_gap")
    check_positive(epsilon, "epsilon")
    epochs = max(1, math.ceil(math.log(w0_gap / epsilon)))
    return SvrgConfig(
        epochs=epochs,
        epoch_length=max(1, math.ceil(problem.average_condition_number)),
        step_size=0.1 / problem.beta_hat,
        seed=seed,
        mode=SvrgMode.THEORETICAL,
    )


def svrg_solve(
    problem: FiniteSumProblem,
    cfg: SvrgConfig,
    w0,
    reference_value: Optional[float] = None,
) -> Tuple[np.ndarray, ConvergenceTrace]:
    """
    Run SVRG for cfg.epochs epochs.

    Each epoch takes the full gradient at the snapshot, draws m indices with
    probability q_i = beta_i / sum beta_j, steps along
    (grad f_i(w) - grad f_i(w_bar)) / (N q_i) + v_bar and returns the average
    of its inner iterates as the next snapshot.

    Args:
        problem: Finite-sum problem
        cfg: SVRG configuration (unset fields resolved against the problem)
        w0: Starting point
        reference_value: min F, when known, to record suboptimality

    Returns:
        (final snapshot, trace with one record per epoch)

    Raises:
        DivergenceError: if the objective becomes non-finite or exceeds its
            initial value by the configured factor
    """
    cfg = cfg.resolve(problem)
    w_bar = as_vector(w0, problem.dimension, name="w0").copy()
    rng = make_rng(cfg.seed)
    table = validate_cumulative_weights(problem.cumulative_weights())
    probabilities = problem.sampling_probabilities()
    N = problem.n_components

    initial = problem.objective(w_bar)
    limit = SketchRidgeConfig.DIVERGENCE_FACTOR * max(abs(initial), np.finfo(float).tiny)
    trace = ConvergenceTrace()
    start = time.perf_counter()
    logger.debug("SVRG start: N=%d m=%d eta=%.4g epochs=%d objective=%.6g",
                 N, cfg.epoch_length, cfg.step_size, cfg.epochs, initial)

    for epoch in range(1, cfg.epochs + 1):
        v_bar = problem.full_gradient(w_bar)
        indices = sample_indices(table, rng.random(cfg.epoch_length))
        divisors = N * probabilities[indices]
        with np.errstate(over="ignore", invalid="ignore"):
            w_bar = problem.run_inner_loop(w_bar, v_bar, cfg.step_size, indices, divisors)
            value = problem.objective(w_bar)
        gap = None if reference_value is None else value - reference_value
        trace.append(epoch, value, gap, time.perf_counter() - start)
        logger.debug("Epoch %d: objective=%.10g", epoch, value)
        if not np.isfinite(value) or value > limit:
            raise DivergenceError(
                f"SVRG diverged at epoch {epoch} (objective {value!r}, step size {cfg.step_size:g})",
                trace=trace,
            )

    logger.info("SVRG finished %d epochs: objective %.10g", cfg.epochs, trace.final.objective)
    return w_bar, trace
