"""
Unit tests for data-matrix storage and kernels.
"""

import numpy as np
import pytest
from scipy import sparse

from sketchridge.core.matrix import DataMatrix, gaussian_matrix
from sketchridge.exceptions import DimensionError, ParameterError, ValidationError


class TestGaussianMatrix:
    """Test the seeded Gaussian draw."""

    def test_shape_and_order(self):
        G = gaussian_matrix(5, 3, seed=1)
        assert G.shape == (5, 3)
        assert G.flags["F_CONTIGUOUS"]

    def test_same_seed_same_matrix(self):
        np.testing.assert_array_equal(gaussian_matrix(4, 4, seed=9), gaussian_matrix(4, 4, seed=9))

    def test_different_seed_differs(self):
        assert not np.array_equal(gaussian_matrix(4, 4, seed=1), gaussian_matrix(4, 4, seed=2))

    @pytest.mark.parametrize("rows,cols", [(0, 3), (3, 0)])
    def test_empty_dimension_rejected(self, rows, cols):
        with pytest.raises(DimensionError):
            gaussian_matrix(rows, cols)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_entry_moments(self, seed):
        G = gaussian_matrix(1000, 1, seed=seed)
        assert abs(G.mean()) < 4.0 / np.sqrt(1000)
        assert 0.8 < G.var() < 1.2


class TestDataMatrix:
    """Test DataMatrix construction and properties."""

    def test_dense_properties(self):
        A = DataMatrix(np.arange(6.0).reshape(2, 3))
        assert A.shape == (2, 3)
        assert A.n_features == 2
        assert A.n_samples == 3
        assert not A.is_sparse
        assert A.nnz == 5

    def test_sparse_storage_is_csc(self):
        A = DataMatrix(sparse.csr_matrix(np.eye(3)))
        assert A.is_sparse
        assert isinstance(A.storage, sparse.csc_matrix)
        assert A.nnz == 3

    def test_non_finite_rejected(self):
        with pytest.raises(ValidationError):
            DataMatrix(np.array([[1.0, np.nan]]))

    def test_non_finite_sparse_rejected(self):
        with pytest.raises(ValidationError):
            DataMatrix(sparse.csc_matrix(np.array([[1.0, np.inf]])))

    def test_non_positive_scale_rejected(self):
        with pytest.raises(ParameterError):
            DataMatrix(np.eye(2), scale=0.0)

    def test_averaged_scale(self):
        A = DataMatrix(np.ones((2, 4)))
        np.testing.assert_allclose(A.averaged().to_dense(), np.full((2, 4), 0.5))

    def test_with_scale_shares_storage(self):
        A = DataMatrix(np.eye(2))
        B = A.with_scale(3.0)
        assert B.storage is A.storage
        assert B.scale == 3.0


class TestKernels:
    """Test matvec and matmul kernels against dense arithmetic."""

    @pytest.fixture(params=["dense", "sparse"])
    def pair(self, request, rng):
        dense = rng.standard_normal((6, 9))
        dense[np.abs(dense) < 0.5] = 0.0
        storage = dense if request.param == "dense" else sparse.csc_matrix(dense)
        return DataMatrix(storage, scale=1.5), 1.5 * dense

    def test_matvec(self, pair, rng):
        A, dense = pair
        v = rng.standard_normal(9)
        np.testing.assert_allclose(A.matvec(v), dense @ v, atol=1e-12)

    def test_rmatvec(self, pair, rng):
        A, dense = pair
        v = rng.standard_normal(6)
        np.testing.assert_allclose(A.rmatvec(v), dense.T @ v, atol=1e-12)

    def test_matmat_and_rmatmat(self, pair, rng):
        A, dense = pair
        M = rng.standard_normal((9, 2))
        R = rng.standard_normal((6, 3))
        np.testing.assert_allclose(A.matmat(M), dense @ M, atol=1e-12)
        np.testing.assert_allclose(A.rmatmat(R), dense.T @ R, atol=1e-12)

    def test_matvec_dimension_mismatch(self, pair):
        A, _ = pair
        with pytest.raises(DimensionError):
            A.matvec(np.ones(6))

    def test_columns_and_norms(self, pair):
        A, dense = pair
        for i in range(dense.shape[1]):
            np.testing.assert_allclose(A.column(i), dense[:, i], atol=1e-15)
        np.testing.assert_allclose(A.column_norms(), np.linalg.norm(dense, axis=0), atol=1e-12)

    def test_column_support_values(self, pair):
        A, dense = pair
        indices, values = A.column_support(2)
        recovered = np.zeros(6)
        recovered[indices] = values
        np.testing.assert_allclose(recovered, dense[:, 2], atol=1e-15)

    def test_gram_symmetric(self, pair):
        A, dense = pair
        G = A.gram()
        np.testing.assert_allclose(G, dense @ dense.T, atol=1e-12)
        np.testing.assert_array_equal(G, G.T)

    def test_scaling_commutes_with_matvec(self, pair, rng):
        A, _ = pair
        v = rng.standard_normal(9)
        np.testing.assert_allclose(A.with_scale(0.25).matvec(v), A.matvec(v) / 6.0, rtol=1e-12)
