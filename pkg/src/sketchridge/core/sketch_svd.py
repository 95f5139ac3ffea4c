"""
Randomized Block Lanczos sketch of the truncated SVD, plus an exact oracle.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..exceptions import DimensionError, ParameterError
from .linalg import fix_signs, orthonormalize, orthonormalize_against, small_svd, sym_eigs
from .matrix import DataMatrix, gaussian_matrix
from .utils import SeedLike, check_count, make_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LanczosConfig:
    """Parameters of a Block Lanczos run."""

    k: int
    eps_prime: float = 0.5
    seed: SeedLike = None
    q_override: Optional[int] = None

    def __post_init__(self):
        check_count(self.k, "k")
        if not 0.0 < self.eps_prime < 1.0:
            raise ParameterError(f"eps_prime must lie in (0, 1), got {self.eps_prime}", name="eps_prime")
        if self.q_override is not None:
            check_count(self.q_override, "q_override")

    def block_count(self, n: int) -> int:
        """q = max(2, ceil(log(n) / sqrt(eps'))) unless overridden."""
        if self.q_override is not None:
            return int(self.q_override)
        return max(2, math.ceil(math.log(max(n, 1)) / math.sqrt(self.eps_prime)))


@dataclass(frozen=True)
class SketchedSVD:
    """Rank-k factors U_k diag(sigma) V_k^T of an (approximate) truncated SVD."""

    left_factor: np.ndarray
    singular_values: np.ndarray
    right_factor: np.ndarray
    q: int = 0
    rank_reduced: bool = False
    requested_k: Optional[int] = field(default=None, compare=False)

    @property
    def k(self) -> int:
        return int(self.singular_values.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.left_factor.shape[0])


def krylov_block(A: DataMatrix, Pi: np.ndarray, q: int) -> np.ndarray:
    """
    Orthonormal basis of span[A Pi, (A A^T) A Pi, ..., (A A^T)^{q-1} A Pi].

    Blocks are built one at a time from the previous orthonormal block and
    re-orthogonalized against everything accepted so far. Directions that are
    already in the span are dropped, and the recursion stops once a block adds
    nothing.

    Args:
        A: d x n data matrix
        Pi: n x k starting block
        q: Number of blocks (>= 1)

    Returns:
        d x p matrix with orthonormal columns, p <= q k
    """
    check_count(q, "q")
    Pi = np.asarray(Pi, dtype=np.float64)
    if Pi.ndim != 2 or Pi.shape[0] != A.n_samples:
        raise DimensionError(f"Starting block must have {A.n_samples} rows, got shape {Pi.shape}",
                             expected=A.n_samples, actual=Pi.shape)

    current = orthonormalize(A.matmat(Pi))
    blocks = [current]
    width = current.shape[1]
    for j in range(1, q):
        candidate = A.matmat(A.rmatmat(current))
        current = orthonormalize_against(candidate, np.hstack(blocks))
        if current.shape[1] == 0:
            logger.debug("Krylov space exhausted after %d of %d blocks (width %d)", j, q, width)
            break
        if current.shape[1] < Pi.shape[1]:
            logger.debug("Block %d lost %d directions to rank drop", j, Pi.shape[1] - current.shape[1])
        blocks.append(current)
        width += current.shape[1]
    return np.asfortranarray(np.hstack(blocks))


def block_lanczos(A: DataMatrix, cfg: LanczosConfig) -> SketchedSVD:
    """
    Randomized Block Lanczos approximation of the rank-k SVD of A.

    With probability at least 9/10 over the seed,
    ||A - A_k~|| <= (1 + eps') sigma_{k+1} and
    |sigma~_i^2 - sigma_i^2| <= eps' sigma_{k+1}^2 for every i <= k.

    Args:
        A: d x n data matrix
        cfg: Lanczos configuration

    Returns:
        SketchedSVD; when the Krylov basis has fewer than k columns the result
        has k' < k factors and ``rank_reduced`` set.
    """
    d, n = A.shape
    if cfg.k > min(d, n):
        raise ParameterError(f"k={cfg.k} exceeds min(d, n)={min(d, n)}", name="k")

    q = cfg.block_count(n)
    Pi = gaussian_matrix(n, cfg.k, cfg.seed)
    Q = krylov_block(A, Pi, q)

    # (Q^T A)^T, n x p
    AtQ = A.rmatmat(Q)
    gram = AtQ.T @ AtQ
    eigenvalues, W = sym_eigs(0.5 * (gram + gram.T))

    k_eff = min(cfg.k, Q.shape[1])
    rank_reduced = k_eff < cfg.k
    if rank_reduced:
        logger.warning("Krylov basis has only %d directions; returning rank %d instead of %d",
                       Q.shape[1], k_eff, cfg.k)

    W_k = W[:, :k_eff]
    sigma = np.sqrt(np.clip(eigenvalues[:k_eff], 0.0, None))
    U = Q @ W_k
    V = AtQ @ W_k
    norms = np.linalg.norm(V, axis=0)
    V = V / np.where(norms > 0, norms, 1.0)
    U, V = fix_signs(U, V)

    logger.info("Block Lanczos: d=%d n=%d k=%d q=%d basis width=%d sigma_1=%.4g",
                d, n, k_eff, q, Q.shape[1], sigma[0] if k_eff else 0.0)
    return SketchedSVD(
        left_factor=np.asfortranarray(U),
        singular_values=sigma,
        right_factor=np.asfortranarray(V),
        q=q,
        rank_reduced=rank_reduced,
        requested_k=cfg.k,
    )


def exact_truncated_svd(A: DataMatrix, k: int) -> SketchedSVD:
    """
    True top-k SVD of A via a dense factorization (test scale).
    """
    d, n = A.shape
    check_count(k, "k")
    if k > min(d, n):
        raise ParameterError(f"k={k} exceeds min(d, n)={min(d, n)}", name="k")
    U, s, V = small_svd(A.to_dense(), k)
    return SketchedSVD(left_factor=U, singular_values=s, right_factor=V, q=0, requested_k=k)


def residual_spectral_norm(A: DataMatrix, sv: SketchedSVD, n_iter: int = 200, seed: SeedLike = 0) -> float:
    """
    Power-iteration estimate of ||A - U_k diag(sigma) V_k^T||.

    Args:
        A: d x n data matrix
        sv: Factors to compare against
        n_iter: Number of power iterations on the residual
        seed: Seed for the starting vector

    Returns:
        Estimated spectral norm of the residual
    """
    rng = make_rng(seed)
    U, s, V = sv.left_factor, sv.singular_values, sv.right_factor

    def residual(x: np.ndarray) -> np.ndarray:
        return A.matvec(x) - U @ (s * (V.T @ x))

    def residual_t(y: np.ndarray) -> np.ndarray:
        return A.rmatvec(y) - V @ (s * (U.T @ y))

    x = rng.standard_normal(A.n_samples)
    x /= np.linalg.norm(x)
    estimate = 0.0
    for _ in range(n_iter):
        y = residual(x)
        estimate = float(np.linalg.norm(y))
        if estimate == 0.0:
            return 0.0
        x = residual_t(y)
        norm = np.linalg.norm(x)
        if norm == 0.0:
            return estimate
        x /= norm
    return float(np.linalg.norm(residual(x)))


def per_vector_errors(sv: SketchedSVD, exact_values: np.ndarray) -> np.ndarray:
    """|sigma~_i^2 - sigma_i^2| for i <= k'."""
    exact_values = np.asarray(exact_values, dtype=np.float64)
    k = sv.k
    return np.abs(sv.singular_values ** 2 - exact_values[:k] ** 2)


def satisfies_error_bounds(sv: SketchedSVD, exact_values: np.ndarray, eps_prime: float) -> bool:
    """
    Whether the per-vector guarantee holds for sv against the exact spectrum.

    Args:
        sv: Sketched factors of rank k
        exact_values: At least k + 1 exact singular values (descending)
        eps_prime: Accuracy parameter

    Returns:
        True when |sigma~_i^2 - sigma_i^2| <= eps' sigma_{k+1}^2 for all i <= k
    """
    exact_values = np.asarray(exact_values, dtype=np.float64)
    k = sv.k
    tail = exact_values[k] if exact_values.shape[0] > k else 0.0
    slack = 1e-12 * max(1.0, float(exact_values[0]) ** 2)
    return bool(np.all(per_vector_errors(sv, exact_values) <= eps_prime * tail ** 2 + slack))
