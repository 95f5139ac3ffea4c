"""
Unit tests for the SVRG engine.
"""

import itertools

import numpy as np
import pytest

from sketchridge.bench.harness import reference_minimum
from sketchridge.core.matrix import DataMatrix
from sketchridge.exceptions import DivergenceError, ParameterError, ValidationError
from sketchridge.optim.base_problem import FiniteSumProblem
from sketchridge.optim.ridge import RidgeProblem, ridge_components
from sketchridge.optim.svrg import (
    ConvergenceTrace,
    SvrgConfig,
    SvrgMode,
    sample_index,
    sample_indices,
    svrg_solve,
    theoretical_params,
)


class ScalarQuadratics(FiniteSumProblem):
    """f_i(w) = 1/2 (w - c_i)^2 with unit smoothness."""

    def __init__(self, centers):
        self.centers = np.asarray(centers, dtype=float)
        super().__init__(n_components=len(centers), dimension=1, betas=np.ones(len(centers)), strong_convexity=1.0)

    def component_gradient(self, i, w):
        return w - self.centers[i]

    def objective(self, w):
        return float(np.mean(0.5 * (w[0] - self.centers) ** 2))


class TestSampling:
    """Test importance sampling from the cumulative table."""

    @pytest.mark.parametrize("u,expected", [(0.0, 0), (0.2, 0), (0.25, 0), (0.3, 1), (0.75, 1), (0.9, 2), (1.0, 2)])
    def test_table_lookup(self, u, expected):
        assert sample_index([0.25, 0.75, 1.0], u) == expected

    def test_single_entry(self):
        assert sample_index([1.0], 0.5) == 0

    def test_zero_weight_never_chosen_inside(self):
        assert sample_index([0.5, 0.5, 1.0], 0.6) == 2

    @pytest.mark.parametrize("table", [[], [0.5, 0.4, 1.0], [0.2, 0.9]])
    def test_malformed_table(self, table):
        with pytest.raises(ValidationError):
            sample_index(table, 0.5)

    def test_u_out_of_range(self):
        with pytest.raises(ValidationError):
            sample_index([1.0], 1.5)

    def test_table_from_problem(self, small_problem):
        comp = ridge_components(small_problem)
        table = comp.cumulative_weights()
        assert table[-1] == 1.0
        np.testing.assert_allclose(np.diff(np.concatenate([[0.0], table])), comp.sampling_probabilities(),
                                   atol=1e-14)

    def test_empirical_frequencies(self):
        probabilities = np.array([0.1, 0.2, 0.3, 0.4])
        draws = 100_000
        indices = sample_indices(np.cumsum(probabilities), np.random.default_rng(0).random(draws))
        frequencies = np.bincount(indices, minlength=4) / draws
        standard_errors = np.sqrt(probabilities * (1.0 - probabilities) / draws)
        assert np.all(np.abs(frequencies - probabilities) <= 4.0 * standard_errors)

    def test_equal_weights_match_uniform_sampling(self):
        problem = ScalarQuadratics(np.arange(7.0))
        np.testing.assert_allclose(problem.sampling_probabilities(), np.full(7, 1.0 / 7.0))
        us = np.random.default_rng(3).random(10_000)
        expected = np.minimum(np.floor(us * 7).astype(int), 6)
        mismatches = np.count_nonzero(sample_indices(problem.cumulative_weights(), us) != expected)
        assert mismatches == 0


class TestUnbiasedDirection:
    """Test that the weighted variance-reduced direction is unbiased."""

    def test_exact_enumeration(self, rng):
        X = rng.standard_normal((3, 6))
        comp = ridge_components(RidgeProblem(DataMatrix(X), rng.standard_normal(6), 0.2))
        q = comp.sampling_probabilities()
        N = comp.n_components
        for _ in range(20):
            w, w_bar = rng.standard_normal(3), rng.standard_normal(3)
            v_bar = comp.full_gradient(w_bar)
            expected = sum(q[i] * comp.variance_reduced_direction(i, w, w_bar, v_bar, N * q[i]) for i in range(N))
            np.testing.assert_allclose(expected, comp.full_gradient(w), atol=1e-10)

    def test_direction_at_snapshot_is_full_gradient(self, small_problem, rng):
        comp = ridge_components(small_problem)
        w = rng.standard_normal(8)
        v = comp.full_gradient(w)
        np.testing.assert_allclose(comp.variance_reduced_direction(3, w, w, v, 2.0), v)


class TestSvrgConfig:
    """Test SVRG parameter resolution."""

    def test_theoretical_resolution(self):
        problem = ScalarQuadratics([1.0, 2.0, 3.0])
        cfg = SvrgConfig(epochs=2).resolve(problem)
        assert cfg.epoch_length == 1
        assert cfg.step_size == pytest.approx(0.1)

    def test_tuned_requires_step(self):
        with pytest.raises(ParameterError):
            SvrgConfig(epochs=2, mode=SvrgMode.TUNED).resolve(ScalarQuadratics([0.0]))

    def test_tuned_epoch_length(self):
        cfg = SvrgConfig(epochs=2, step_size=0.5, mode="tuned").resolve(ScalarQuadratics([0.0, 1.0]))
        assert cfg.epoch_length == 4

    @pytest.mark.parametrize("kwargs", [{"epochs": 0}, {"epochs": 1, "epoch_length": 0}, {"epochs": 1, "step_size": 0.0}])
    def test_invalid(self, kwargs):
        with pytest.raises(ParameterError):
            SvrgConfig(**kwargs)

    def test_theoretical_params(self):
        problem = ScalarQuadratics([0.0, 1.0])
        cfg = theoretical_params(problem, w0_gap=100.0, epsilon=1e-2)
        assert cfg.epochs == int(np.ceil(np.log(1e4)))
        assert cfg.epoch_length == 1
        assert cfg.step_size == pytest.approx(0.1)


class TestSvrgSolve:
    """Test the SVRG loop."""

    def test_scalar_tuned_converges(self):
        problem = ScalarQuadratics([1.0, 2.0, 3.0])
        cfg = SvrgConfig(epochs=10, epoch_length=6, step_size=0.5, seed=0)
        w, trace = svrg_solve(problem, cfg, np.zeros(1))
        assert w[0] == pytest.approx(2.0, abs=1e-6)
        assert len(trace) == 10

    def test_scalar_theoretical_converges(self):
        problem = ScalarQuadratics([1.0, 2.0, 3.0])
        w, _ = svrg_solve(problem, SvrgConfig(epochs=150, seed=0), np.zeros(1))
        assert w[0] == pytest.approx(2.0, abs=1e-6)

    def test_trace_records_suboptimality(self):
        problem = ScalarQuadratics([1.0, 3.0])
        _, trace = svrg_solve(problem, SvrgConfig(epochs=5, epoch_length=4, step_size=0.5, seed=1), [0.0],
                              reference_value=0.5)
        assert [r.epoch for r in trace] == [1, 2, 3, 4, 5]
        np.testing.assert_allclose(trace.suboptimalities, trace.objectives - 0.5)
        assert all(r.elapsed_seconds >= 0 for r in trace)

    def test_seed_reproducible(self, small_problem):
        comp = ridge_components(small_problem)
        cfg = SvrgConfig(epochs=3, seed=4)
        a, _ = svrg_solve(comp, cfg, np.zeros(8))
        b, _ = svrg_solve(comp, cfg, np.zeros(8))
        np.testing.assert_array_equal(a, b)

    def test_ridge_decreases(self, small_problem):
        comp = ridge_components(small_problem)
        _, trace = svrg_solve(comp, SvrgConfig(epochs=15, seed=0), np.zeros(8))
        assert trace.final.objective < comp.objective(np.zeros(8))

    def test_minimizer_is_fixed_point(self, small_problem):
        comp = ridge_components(small_problem)
        w_star, value = reference_minimum(small_problem)
        w, trace = svrg_solve(comp, SvrgConfig(epochs=3, seed=2), w_star, reference_value=value)
        np.testing.assert_allclose(w, w_star, atol=1e-10)
        assert np.all(np.abs(trace.suboptimalities) <= 1e-12)

    def test_divergence_raises_with_trace(self):
        problem = ScalarQuadratics([1.0, 2.0])
        with pytest.raises(DivergenceError) as exc_info:
            svrg_solve(problem, SvrgConfig(epochs=50, epoch_length=10, step_size=5.0, seed=0), np.zeros(1))
        assert len(exc_info.value.trace) >= 1

    def test_wrong_start_dimension(self):
        with pytest.raises(ValidationError):
            svrg_solve(ScalarQuadratics([1.0]), SvrgConfig(epochs=1), np.zeros(2))


class TestConvergenceTrace:
    """Test trace bookkeeping."""

    def test_epochs_strictly_increasing(self):
        trace = ConvergenceTrace()
        trace.append(1, 2.0, None, 0.1)
        with pytest.raises(ValidationError):
            trace.append(1, 1.0, None, 0.2)

    def test_missing_suboptimality_is_nan(self):
        trace = ConvergenceTrace()
        trace.append(1, 2.0, None, 0.1)
        assert np.isnan(trace.suboptimalities[0])

    def test_empty_final(self):
        assert ConvergenceTrace().final is None
