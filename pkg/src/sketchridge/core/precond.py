"""
Structured rank-k preconditioners and condition-number diagnostics.

A preconditioner stores P^{-1/2} = c I + U (diag(inv_sqrt_diag) - c I) U^T
through its orthonormal basis U (d x k), the per-direction coefficients and the
tail coefficient c. The orthonormal completion of U is never formed.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional

import numpy as np

from ..config import SketchRidgeConfig
from ..exceptions import DegenerateSpectrumError, DimensionError, ParameterError, ScaleGuardError, ValidationError
from .linalg import sym_eigs
from .matrix import DataMatrix
from .sketch_svd import SketchedSVD
from .utils import check_count, check_positive

logger = logging.getLogger(__name__)


class PreconditionerKind(str, Enum):
    SKETCHED = "sketched"
    EXACT = "exact"
    IDENTITY = "identity"
    OPTIMAL = "optimal"


@dataclass(frozen=True)
class Preconditioner:
    """Immutable structured operator P^{+-1/2}."""

    basis: np.ndarray
    inv_sqrt_diag: np.ndarray
    tail_coeff: float
    lam: float
    kind: PreconditionerKind

    @property
    def dimension(self) -> int:
        return int(self.basis.shape[0])

    @property
    def rank(self) -> int:
        return int(self.basis.shape[1])

    @property
    def min_inv_sqrt(self) -> float:
        """Smallest eigenvalue of P^{-1/2}."""
        if self.rank == 0:
            return float(self.tail_coeff)
        return float(min(self.inv_sqrt_diag.min(), self.tail_coeff))

    def _check(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.float64)
        if v.ndim not in (1, 2) or v.shape[0] != self.dimension:
            raise DimensionError(f"Operand has leading dimension {v.shape[0] if v.ndim else 0}, "
                                 f"expected {self.dimension}", expected=self.dimension, actual=v.shape)
        if not np.all(np.isfinite(v)):
            raise ValidationError("Operand contains non-finite entries")
        return v

    def _apply(self, v: np.ndarray, coeffs: np.ndarray, tail: float) -> np.ndarray:
        v = self._check(v)
        if self.rank == 0:
            return tail * v
        proj = self.basis.T @ v
        weights = coeffs - tail
        if v.ndim == 1:
            return tail * v + self.basis @ (weights * proj)
        return tail * v + self.basis @ (weights[:, None] * proj)

    def apply_inv_sqrt(self, v: np.ndarray) -> np.ndarray:
        """P^{-1/2} v for a d-vector or a d x m matrix, O(dk) per column."""
        return self._apply(v, self.inv_sqrt_diag, self.tail_coeff)

    def apply_sqrt(self, v: np.ndarray) -> np.ndarray:
        """P^{1/2} v, the exact inverse of apply_inv_sqrt."""
        return self._apply(v, 1.0 / self.inv_sqrt_diag, 1.0 / self.tail_coeff)

    def inv_sqrt_norms_sq(self, norms_sq: np.ndarray, projections: np.ndarray) -> np.ndarray:
        """
        ||P^{-1/2} v||^2 from ||v||^2 and the projections U^T v, O(k) per vector.

        Args:
            norms_sq: Squared norms of the vectors, shape (m,)
            projections: U^T v for each vector, shape (m, k)
        """
        c2 = self.tail_coeff ** 2
        if self.rank == 0:
            return c2 * np.asarray(norms_sq, dtype=np.float64)
        return c2 * norms_sq + (projections ** 2) @ (self.inv_sqrt_diag ** 2 - c2)

    def to_dense_inv_sqrt(self) -> np.ndarray:
        """Dense d x d matrix P^{-1/2} (test scale)."""
        return self.apply_inv_sqrt(np.eye(self.dimension))


@dataclass(frozen=True)
class SpectrumSummary:
    """Eigenvalues of C = X_bar X_bar^T together with the regularization."""

    eigenvalues: np.ndarray
    lam: float

    def __post_init__(self):
        values = np.asarray(self.eigenvalues, dtype=np.float64).ravel()
        if values.size and values.max() > 0:
            values = np.where(np.abs(values) <= 1e-12 * values.max(), 0.0, values)
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValidationError("Spectrum must be finite and non-negative")
        if np.any(np.diff(values) > 0):
            raise ValidationError("Spectrum must be in descending order")
        object.__setattr__(self, "eigenvalues", values)
        object.__setattr__(self, "lam", float(self.lam))

    @property
    def dimension(self) -> int:
        return int(self.eigenvalues.shape[0])

    @classmethod
    def from_data(cls, data: DataMatrix, lam: float) -> "SpectrumSummary":
        """Spectrum of C = X_bar X_bar^T for a d x n matrix X (test scale)."""
        _guard(data.n_features)
        values, _ = sym_eigs(data.averaged().gram())
        return cls(np.clip(values, 0.0, None), lam)


def _guard(d: int) -> None:
    limit = SketchRidgeConfig.get_densify_guard()
    if d > limit:
        raise ScaleGuardError(f"Dimension {d} exceeds the densify guard {limit}", limit=limit, requested=d)


def _from_factors(basis: np.ndarray, sigma: np.ndarray, lam: float, kind: PreconditionerKind) -> Preconditioner:
    lam = check_positive(lam, "lambda")
    if sigma.shape[0] < 1:
        raise ParameterError("Preconditioner needs at least one direction", name="k")
    inv_sqrt = 1.0 / np.sqrt(sigma ** 2 + lam)
    # sigma is non-increasing, so inv_sqrt is non-decreasing
    inv_sqrt = np.maximum.accumulate(inv_sqrt)
    return Preconditioner(
        basis=np.asfortranarray(basis),
        inv_sqrt_diag=inv_sqrt,
        tail_coeff=float(inv_sqrt[-1]),
        lam=lam,
        kind=kind,
    )


def build_sketched(sv: SketchedSVD, lam: float) -> Preconditioner:
    """Sketched preconditioner from Block Lanczos factors of X_bar."""
    P = _from_factors(sv.left_factor, sv.singular_values, lam, PreconditionerKind.SKETCHED)
    logger.info("Built sketched preconditioner: d=%d k=%d c=%.4g", P.dimension, P.rank, P.tail_coeff)
    return P


def build_exact(sv: SketchedSVD, lam: float) -> Preconditioner:
    """Preconditioner from the exact top-k SVD of X_bar."""
    return _from_factors(sv.left_factor, sv.singular_values, lam, PreconditionerKind.EXACT)


def build_identity(d: int, lam: float) -> Preconditioner:
    """P = I."""
    check_count(d, "d")
    return Preconditioner(
        basis=np.zeros((d, 0), order="F"),
        inv_sqrt_diag=np.zeros(0),
        tail_coeff=1.0,
        lam=check_positive(lam, "lambda"),
        kind=PreconditionerKind.IDENTITY,
    )


def build_optimal(data: DataMatrix, lam: float) -> Preconditioner:
    """Whitening preconditioner P = C + lambda I (test scale)."""
    _guard(data.n_features)
    values, vectors = sym_eigs(data.averaged().gram())
    sigma = np.sqrt(np.clip(values, 0.0, None))
    return _from_factors(vectors, sigma, lam, PreconditionerKind.OPTIMAL)


def avg_condition_number(spec: SpectrumSummary) -> float:
    """sum_i (lambda_i + lambda) / (lambda_d + lambda)."""
    if spec.dimension == 0:
        raise ValidationError("Spectrum is empty")
    shifted = spec.eigenvalues + spec.lam
    if shifted[-1] <= 0:
        raise ValidationError("Smallest shifted eigenvalue must be positive")
    return float(np.sum(shifted) / shifted[-1])


def conditioned_matrix(data: DataMatrix, lam: float, P: Preconditioner) -> np.ndarray:
    """Dense M = P^{-1/2} (C + lambda I) P^{-1/2} (test scale)."""
    d = data.n_features
    _guard(d)
    if P.dimension != d:
        raise DimensionError("Preconditioner dimension does not match data", expected=d, actual=P.dimension)
    P_inv_sqrt = P.to_dense_inv_sqrt()
    shifted = data.averaged().gram() + lam * np.eye(d)
    M = P_inv_sqrt @ shifted @ P_inv_sqrt
    return 0.5 * (M + M.T)


def conditioned_spectrum(data: DataMatrix, lam: float, P: Preconditioner) -> np.ndarray:
    """Descending eigenvalues of P^{-1/2} (C + lambda I) P^{-1/2}."""
    values, _ = sym_eigs(conditioned_matrix(data, lam, P))
    return values


def conditioned_condition_number(data: DataMatrix, lam: float, P: Preconditioner) -> float:
    """tr(M) / lambda_d(M) for M = P^{-1/2} (C + lambda I) P^{-1/2}."""
    check_positive(lam, "lambda")
    values = conditioned_spectrum(data, lam, P)
    if values[-1] <= 0:
        raise DegenerateSpectrumError("Conditioned matrix is not positive definite")
    return float(np.sum(values) / values[-1])


def theoretical_ratio(spec: SpectrumSummary, k: int) -> float:
    """Predicted speed-up sum_i lambda_i / (k lambda_k + sum_{i>k} lambda_i)."""
    check_count(k, "k")
    if k > spec.dimension:
        raise ParameterError(f"k={k} exceeds dimension {spec.dimension}", name="k")
    values = spec.eigenvalues
    head = float(np.sum(values[:k]))
    tail = float(np.sum(values[k:]))
    denominator = k * float(values[k - 1]) + tail
    if denominator <= 0:
        raise DegenerateSpectrumError("Spectrum is zero; ratio undefined")
    return (head + tail) / denominator


def exact_condition_bound(spec: SpectrumSummary, k: int) -> float:
    """(k lambda_k + sum_{i>k} lambda_i) / lambda + d."""
    check_count(k, "k")
    if k > spec.dimension:
        raise ParameterError(f"k={k} exceeds dimension {spec.dimension}", name="k")
    values = spec.eigenvalues
    return float((k * values[k - 1] + np.sum(values[k:])) / spec.lam + spec.dimension)


LEADING_EIGENVALUE_CONSTANT = 17.0
TAIL_EIGENVALUE_CONSTANT = 2.0
SMALLEST_EIGENVALUE_CONSTANT = 19.0


def check_sketched_bounds(
    conditioned_eigenvalues: np.ndarray, spec: SpectrumSummary, k: int, tol: float = 1e-9
) -> Dict[str, bool]:
    """
    Check the eigenvalue bounds of a sketched-preconditioned matrix.

    Args:
        conditioned_eigenvalues: Descending eigenvalues of M
        spec: Spectrum of C with the regularization
        k: Sketch rank
        tol: Relative slack for rounding

    Returns:
        Dict with keys ``leading`` (lambda_1(M) <= 17), ``tail``
        (lambda_i(M) <= 2 (lambda_i + lambda)/(lambda_k + lambda) for i > k)
        and ``smallest`` (lambda_d(M) >= lambda / (19 (lambda_k + lambda)))
    """
    mu = np.asarray(conditioned_eigenvalues, dtype=np.float64)
    lam = spec.lam
    values = spec.eigenvalues
    anchor = values[k - 1] + lam
    tail_bounds = TAIL_EIGENVALUE_CONSTANT * (values[k:] + lam) / anchor
    return {
        "leading": bool(mu[0] <= LEADING_EIGENVALUE_CONSTANT * (1 + tol)),
        "tail": bool(np.all(mu[k:] <= tail_bounds * (1 + tol))),
        "smallest": bool(mu[-1] >= lam / (SMALLEST_EIGENVALUE_CONSTANT * anchor) * (1 - tol)),
    }
