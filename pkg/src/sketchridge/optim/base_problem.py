"""
Base class for finite-sum problems consumed by the SVRG engine.
"""

import logging
from abc import ABC, abstractmethod
from typing import Sequence

import numpy as np

from ..exceptions import ValidationError

logger = logging.getLogger(__name__)


class FiniteSumProblem(ABC):
    """
    Abstract average F(w) = (1/N) sum_i f_i(w) of smooth components.

    Subclasses provide component gradients, the objective and the smoothness
    constants. The default full gradient and inner loop are generic; subclasses
    override them when the structure allows something cheaper.
    """

    def __init__(self, n_components: int, dimension: int, betas: np.ndarray, strong_convexity: float):
        """
        Initialize the problem description.

        Args:
            n_components: Number of components N
            dimension: Dimension d of the variable
            betas: Smoothness constants beta_i, shape (N,), all positive
            strong_convexity: Strong-convexity constant alpha (or a lower bound)
        """
        betas = np.asarray(betas, dtype=np.float64)
        if betas.shape != (n_components,):
            raise ValidationError(f"Expected {n_components} smoothness constants, got shape {betas.shape}")
        if not np.all(np.isfinite(betas)) or np.any(betas <= 0):
            raise ValidationError("Smoothness constants must be finite and positive")
        if not np.isfinite(strong_convexity) or strong_convexity <= 0:
            raise ValidationError(f"Strong convexity must be positive, got {strong_convexity}")
        self.n_components = int(n_components)
        self.dimension = int(dimension)
        self.betas = betas
        self.strong_convexity = float(strong_convexity)

    @abstractmethod
    def component_gradient(self, i: int, w: np.ndarray) -> np.ndarray:
        """Gradient of f_i at w."""
        raise NotImplementedError("Subclasses must implement component_gradient")

    @abstractmethod
    def objective(self, w: np.ndarray) -> float:
        """F(w)."""
        raise NotImplementedError("Subclasses must implement objective")

    def full_gradient(self, w: np.ndarray) -> np.ndarray:
        """(1/N) sum_i grad f_i(w)."""
        total = np.zeros(self.dimension)
        for i in range(self.n_components):
            total += self.component_gradient(i, w)
        return total / self.n_components

    @property
    def beta_hat(self) -> float:
        """Average smoothness (1/N) sum_i beta_i."""
        return float(np.mean(self.betas))

    @property
    def average_condition_number(self) -> float:
        """beta_hat / alpha."""
        return self.beta_hat / self.strong_convexity

    def sampling_probabilities(self) -> np.ndarray:
        """q_i = beta_i / sum_j beta_j."""
        return self.betas / np.sum(self.betas)

    def cumulative_weights(self) -> np.ndarray:
        """Cumulative sampling table ending exactly at 1."""
        table = np.cumsum(self.betas) / np.sum(self.betas)
        table[-1] = 1.0
        return table

    def variance_reduced_direction(
        self, i: int, w: np.ndarray, w_bar: np.ndarray, v_bar: np.ndarray, divisor: float
    ) -> np.ndarray:
        """(grad f_i(w) - grad f_i(w_bar)) / divisor + v_bar."""
        return (self.component_gradient(i, w) - self.component_gradient(i, w_bar)) / divisor + v_bar

    def run_inner_loop(
        self,
        w_bar: np.ndarray,
        v_bar: np.ndarray,
        step_size: float,
        indices: Sequence[int],
        divisors: Sequence[float],
    ) -> np.ndarray:
        """
        Run one epoch of inner steps started at the snapshot.

        Args:
            w_bar: Snapshot point (also the starting iterate)
            v_bar: Full gradient at the snapshot
            step_size: Step size eta
            indices: Sampled component indices i_1..i_m
            divisors: N q_{i_t} for each sampled index

        Returns:
            Average of the inner iterates w_1..w_m
        """
        w = w_bar.copy()
        total = np.zeros_like(w)
        for i, divisor in zip(indices, divisors):
            w -= step_size * self.variance_reduced_direction(i, w, w_bar, v_bar, divisor)
            total += w
        return total / len(indices)

