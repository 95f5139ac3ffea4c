"""
Unit tests for the ridge problem and its finite-sum decomposition.
"""

import numpy as np
import pytest

from sketchridge.core.matrix import DataMatrix
from sketchridge.exceptions import DimensionError, ParameterError, ValidationError
from sketchridge.optim.ridge import RidgeProblem, objective, ridge_components


class TestRidgeProblem:
    """Test RidgeProblem validation and the objective."""

    def test_single_point_example(self):
        """x = (1, 0), y = 1, lambda = 1, w = (1, 0) gives L = 0.5."""
        p = RidgeProblem(DataMatrix(np.array([[1.0], [0.0]])), np.array([1.0]), 1.0)
        assert objective(p, np.array([1.0, 0.0])) == pytest.approx(0.5)

    def test_zero_weights(self):
        p = RidgeProblem(DataMatrix(np.eye(2)), np.array([2.0, -2.0]), 0.3)
        assert objective(p, np.zeros(2)) == pytest.approx(2.0)

    def test_label_length_mismatch(self):
        with pytest.raises(DimensionError):
            RidgeProblem(DataMatrix(np.eye(2)), np.ones(3), 1.0)

    @pytest.mark.parametrize("lam", [0.0, -1.0])
    def test_lambda_must_be_positive(self, lam):
        with pytest.raises(ParameterError):
            RidgeProblem(DataMatrix(np.eye(2)), np.ones(2), lam)

    def test_objective_validates_w(self, small_problem):
        with pytest.raises(DimensionError):
            objective(small_problem, np.zeros(3))
        with pytest.raises(ValidationError):
            objective(small_problem, np.full(8, np.nan))

    def test_gradient_matches_finite_differences(self, small_problem, rng):
        w = rng.standard_normal(8)
        grad = small_problem.gradient(w)
        h = 1e-6
        fd = np.array([(small_problem.value(w + h * e) - small_problem.value(w - h * e)) / (2 * h)
                       for e in np.eye(8)])
        np.testing.assert_allclose(grad, fd, rtol=1e-6, atol=1e-8)

    def test_normal_equations_at_minimum(self, small_problem):
        d = small_problem.n_features
        C = small_problem.data.averaged().gram()
        w_star = np.linalg.solve(C + small_problem.lam * np.eye(d), small_problem.correlation_rhs())
        assert np.linalg.norm(small_problem.gradient(w_star)) < 1e-10


class TestRidgeComponents:
    """Test the (n + d)-component decomposition."""

    def test_component_count_and_betas(self):
        X = np.array([[1.0, 0.0], [0.0, 2.0]])
        comp = ridge_components(RidgeProblem(DataMatrix(X), np.zeros(2), 0.5))
        assert comp.n_components == 4
        np.testing.assert_allclose(comp.betas, [2.0, 8.0, 2.0, 2.0])
        assert comp.strong_convexity == 0.5

    def test_average_of_components_is_objective(self, small_problem, rng):
        comp = ridge_components(small_problem)
        w = rng.standard_normal(8)
        mean = np.mean([comp.component_value(i, w) for i in range(comp.n_components)])
        assert mean == pytest.approx(objective(small_problem, w), rel=1e-12)

    def test_generic_full_gradient_matches(self, sparse_problem, rng):
        comp = ridge_components(sparse_problem)
        w = rng.standard_normal(sparse_problem.n_features)
        generic = super(type(comp), comp).full_gradient(w)
        np.testing.assert_allclose(generic, comp.full_gradient(w), atol=1e-12)

    def test_zero_column_keeps_positive_beta(self):
        X = np.array([[1.0, 0.0], [1.0, 0.0]])
        comp = ridge_components(RidgeProblem(DataMatrix(X), np.ones(2), 1.0))
        assert np.all(comp.betas > 0)

    def test_component_smoothness(self, small_problem, rng):
        """||grad f_i(a) - grad f_i(b)|| <= beta_i ||a - b||."""
        comp = ridge_components(small_problem)
        a, b = rng.standard_normal(8), rng.standard_normal(8)
        for i in range(comp.n_components):
            diff = np.linalg.norm(comp.component_gradient(i, a) - comp.component_gradient(i, b))
            assert diff <= comp.betas[i] * np.linalg.norm(a - b) * (1 + 1e-12)
