"""
Dense and sparse data-matrix storage with the matvec/matmul kernels.

Dense storage is a float64 column-major ``numpy.ndarray``; sparse storage is a
``scipy.sparse.csc_matrix`` whose columns are the data points.
"""

import logging
from typing import Tuple, Union

import numpy as np
from scipy import sparse

from ..exceptions import DimensionError, ValidationError
from .utils import SeedLike, as_dense, check_positive, make_rng

logger = logging.getLogger(__name__)

Storage = Union[np.ndarray, sparse.csc_matrix]


def gaussian_matrix(rows: int, cols: int, seed: SeedLike = None) -> np.ndarray:
    """
    Draw a matrix with i.i.d. standard-normal entries.

    Args:
        rows: Number of rows (>= 1)
        cols: Number of columns (>= 1)
        seed: Seed or Generator; identical seeds give identical matrices

    Returns:
        Column-major float64 array of shape (rows, cols)
    """
    if rows < 1 or cols < 1:
        raise DimensionError(f"Gaussian matrix needs positive dimensions, got {rows}x{cols}",
                             expected="rows>=1, cols>=1", actual=(rows, cols))
    rng = make_rng(seed)
    return np.asfortranarray(rng.standard_normal((int(rows), int(cols))))


def _coerce_storage(storage) -> Storage:
    if sparse.issparse(storage):
        csc = sparse.csc_matrix(storage, dtype=np.float64, copy=True)
        csc.sum_duplicates()
        csc.eliminate_zeros()
        csc.sort_indices()
        if not np.all(np.isfinite(csc.data)):
            raise ValidationError("Sparse storage contains non-finite values")
        return csc
    return np.asfortranarray(as_dense(storage, name="dense storage"))


class DataMatrix:
    """
    A d x n data matrix whose logical entries are ``scale * storage``.

    Columns are data points. The scale lets the averaged matrix
    X_bar = n^{-1/2} X (and any uniform normalization) share storage with X.
    """

    def __init__(self, storage, scale: float = 1.0):
        """
        Initialize the data matrix.

        Args:
            storage: Dense array-like or scipy sparse matrix of shape (d, n)
            scale: Positive factor applied to every stored entry
        """
        self.storage = _coerce_storage(storage)
        self.scale = check_positive(scale, "scale")
        rows, cols = self.storage.shape
        if rows < 1 or cols < 1:
            raise DimensionError(f"Data matrix must be non-empty, got {rows}x{cols}",
                                 expected="non-empty", actual=(rows, cols))

    def __repr__(self) -> str:
        kind = "sparse" if self.is_sparse else "dense"
        return f"DataMatrix({self.shape[0]}x{self.shape[1]}, {kind}, scale={self.scale:g})"

    @property
    def shape(self) -> Tuple[int, int]:
        return self.storage.shape

    @property
    def n_features(self) -> int:
        """Dimension d (rows)."""
        return self.storage.shape[0]

    @property
    def n_samples(self) -> int:
        """Number of data points n (columns)."""
        return self.storage.shape[1]

    @property
    def is_sparse(self) -> bool:
        return sparse.issparse(self.storage)

    @property
    def nnz(self) -> int:
        if self.is_sparse:
            return int(self.storage.nnz)
        return int(np.count_nonzero(self.storage))

    def with_scale(self, scale: float) -> "DataMatrix":
        """Return a matrix sharing this storage with a different scale."""
        out = DataMatrix.__new__(DataMatrix)
        out.storage = self.storage
        out.scale = check_positive(scale, "scale")
        return out

    def averaged(self) -> "DataMatrix":
        """Return X_bar = n^{-1/2} X."""
        return self.with_scale(self.scale / np.sqrt(self.n_samples))

    def _check_rows(self, arr: np.ndarray, expected: int, op: str) -> None:
        if arr.shape[0] != expected:
            raise DimensionError(f"{op}: operand has {arr.shape[0]} rows, expected {expected}",
                                 expected=expected, actual=arr.shape[0])

    def matvec(self, v) -> np.ndarray:
        """Return A v for an n-vector v."""
        v = np.asarray(v, dtype=np.float64)
        if v.ndim != 1:
            raise DimensionError("matvec expects a vector", expected=1, actual=v.ndim)
        self._check_rows(v, self.n_samples, "matvec")
        return self.scale * np.asarray(self.storage @ v).ravel()

    def rmatvec(self, v) -> np.ndarray:
        """Return A^T v for a d-vector v."""
        v = np.asarray(v, dtype=np.float64)
        if v.ndim != 1:
            raise DimensionError("rmatvec expects a vector", expected=1, actual=v.ndim)
        self._check_rows(v, self.n_features, "rmatvec")
        return self.scale * np.asarray(self.storage.T @ v).ravel()

    def matmat(self, M) -> np.ndarray:
        """Return A M for an n x m matrix M."""
        M = as_dense(M, name="matmat operand")
        self._check_rows(M, self.n_samples, "matmat")
        return np.asfortranarray(self.scale * np.asarray(self.storage @ M))

    def rmatmat(self, M) -> np.ndarray:
        """Return A^T M for a d x m matrix M."""
        M = as_dense(M, name="rmatmat operand")
        self._check_rows(M, self.n_features, "rmatmat")
        return np.asfortranarray(self.scale * np.asarray(self.storage.T @ M))

    def column(self, i: int) -> np.ndarray:
        """Return the logical column x_i as a dense d-vector."""
        if self.is_sparse:
            indices, values = self.column_support(i)
            out = np.zeros(self.n_features)
            out[indices] = values
            return out
        return self.scale * self.storage[:, i]

    def column_support(self, i: int) -> Tuple[np.ndarray, np.ndarray]:
        """Return (row indices, logical values) of column i."""
        if self.is_sparse:
            start, end = self.storage.indptr[i], self.storage.indptr[i + 1]
            return self.storage.indices[start:end], self.scale * self.storage.data[start:end]
        return np.arange(self.n_features), self.scale * self.storage[:, i]

    def column_norms(self) -> np.ndarray:
        """Euclidean norms of the logical columns."""
        if self.is_sparse:
            sq = np.asarray(self.storage.multiply(self.storage).sum(axis=0)).ravel()
            return self.scale * np.sqrt(sq)
        return self.scale * np.linalg.norm(self.storage, axis=0)

    def to_dense(self) -> np.ndarray:
        """Logical entries as a dense column-major array (test scale)."""
        if self.is_sparse:
            return np.asfortranarray(self.scale * self.storage.toarray())
        return np.asfortranarray(self.scale * self.storage)

    def gram(self) -> np.ndarray:
        """Dense d x d matrix A A^T."""
        if self.is_sparse:
            G = (self.storage @ self.storage.T).toarray()
        else:
            G = self.storage @ self.storage.T
        G = (self.scale ** 2) * np.asarray(G)
        return 0.5 * (G + G.T)
