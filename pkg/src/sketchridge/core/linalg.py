"""
Deterministic dense kernels: orthonormalization, small SVD, symmetric eigensolve.
"""

import logging
from typing import Optional, Tuple

import numpy as np
from scipy import linalg

from ..config import SketchRidgeConfig
from ..exceptions import DimensionError, EmptyBasisError, ParameterError, ValidationError
from .utils import as_dense

logger = logging.getLogger(__name__)


def orthonormalize_against(
    M: np.ndarray,
    basis: Optional[np.ndarray] = None,
    tol: float = SketchRidgeConfig.RANK_DROP_TOLERANCE,
) -> np.ndarray:
    """
    Orthonormalize the columns of M against an existing basis and each other.

    Each column is projected out of the basis and of the columns accepted before
    it, twice (classical Gram-Schmidt with re-orthogonalization). A column whose
    norm after projection falls below ``tol`` times the largest input column
    norm is dropped.

    Args:
        M: d x m matrix of candidate columns
        basis: d x p matrix with orthonormal columns (optional)
        tol: Relative rank-drop tolerance

    Returns:
        d x m' matrix (m' <= m) of new orthonormal columns, possibly empty
    """
    M = as_dense(M, name="orthonormalize input")
    rows = M.shape[0]
    if basis is not None and basis.shape[0] != rows:
        raise DimensionError("Basis and candidate columns disagree on row count",
                             expected=rows, actual=basis.shape[0])

    reference = float(np.max(np.linalg.norm(M, axis=0))) if M.shape[1] else 0.0
    out = np.empty((rows, M.shape[1]))
    accepted = 0
    if reference == 0.0:
        return out[:, :0]

    for j in range(M.shape[1]):
        v = M[:, j].copy()
        for _ in range(2):
            if basis is not None and basis.shape[1]:
                v -= basis @ (basis.T @ v)
            if accepted:
                Q = out[:, :accepted]
                v -= Q @ (Q.T @ v)
        norm = np.linalg.norm(v)
        if norm < tol * reference:
            logger.debug("Dropping column %d (residual norm %.3e)", j, norm)
            continue
        out[:, accepted] = v / norm
        accepted += 1
    return np.asfortranarray(out[:, :accepted])


def orthonormalize(M: np.ndarray) -> np.ndarray:
    """
    Orthonormal basis of the column space of M.

    Numerically rank-deficient columns are dropped, so the result may have
    fewer columns than M.

    Raises:
        EmptyBasisError: if no column survives (all-zero input)
    """
    M = as_dense(M, name="orthonormalize input")
    if M.shape[1] < 1:
        raise DimensionError("orthonormalize needs at least one column", expected=">=1", actual=0)
    Q = orthonormalize_against(M)
    if Q.shape[1] == 0:
        raise EmptyBasisError("Input has no nonzero column; basis is empty")
    return Q


def fix_signs(U: np.ndarray, V: Optional[np.ndarray] = None) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """
    Flip singular-vector pairs so the largest-magnitude entry of each column of U
    is positive (ties go to the lowest index).
    """
    if U.shape[1] == 0:
        return U, V
    pivots = np.argmax(np.abs(U), axis=0)
    signs = np.sign(U[pivots, np.arange(U.shape[1])])
    signs[signs == 0] = 1.0
    U = U * signs
    if V is not None:
        V = V * signs
    return U, V


def small_svd(M: np.ndarray, k: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Top-k singular triplets of a small dense matrix.

    Args:
        M: rows x cols matrix
        k: Number of triplets, 1 <= k <= min(rows, cols)

    Returns:
        (U_k, sigma_k, V_k) with orthonormal factor columns and non-increasing sigma
    """
    M = as_dense(M, name="small_svd input")
    if k < 1:
        raise ParameterError(f"k must be positive, got {k}", name="k")
    if k > min(M.shape):
        raise ParameterError(f"k={k} exceeds min{M.shape}", name="k")
    U, s, Vt = linalg.svd(M, full_matrices=False, lapack_driver="gesdd")
    U, V = fix_signs(U[:, :k], Vt[:k, :].T)
    return np.asfortranarray(U), s[:k].copy(), np.asfortranarray(V)


def sym_eigs(S: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigendecomposition of a symmetric matrix.

    Returns:
        (eigenvalues in descending order, eigenvectors as columns)

    Raises:
        ValidationError: if S is not symmetric within tolerance
    """
    S = as_dense(S, name="sym_eigs input")
    if S.shape[0] != S.shape[1]:
        raise DimensionError("sym_eigs needs a square matrix", expected="square", actual=S.shape)
    scale = max(1.0, float(np.max(np.abs(S))))
    if np.max(np.abs(S - S.T)) > SketchRidgeConfig.SYMMETRY_TOLERANCE * scale:
        raise ValidationError("Matrix is not symmetric")
    values, vectors = linalg.eigh(0.5 * (S + S.T))
    return values[::-1].copy(), np.asfortranarray(vectors[:, ::-1])
