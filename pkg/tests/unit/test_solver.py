"""
Unit tests for the SketchedRidgeSolver facade.
"""

import logging

import numpy as np
import pytest

from sketchridge import SketchedRidgeSolver, SvrgConfig, objective, plain_svrg, sketched_preconditioned_svrg
from sketchridge.core.matrix import DataMatrix
from sketchridge.core.precond import SpectrumSummary, conditioned_condition_number, exact_condition_bound
from sketchridge.exceptions import ParameterError
from sketchridge.optim.ridge import RidgeProblem
from sketchridge.optim.svrg import SvrgMode

from tests.test_utils import random_problem


def _minimum(problem):
    C = problem.data.averaged().gram()
    w = np.linalg.solve(C + problem.lam * np.eye(problem.n_features), problem.correlation_rhs())
    return w, objective(problem, w)


class TestSolverInitialization:
    """Test solver construction."""

    def test_run_id_format(self):
        solver = SketchedRidgeSolver(k=2)
        assert len(solver.run_id.split("_")) == 3

    def test_invalid_k(self):
        with pytest.raises(ParameterError):
            SketchedRidgeSolver(k=0)

    def test_k_exceeds_dimension(self, small_problem):
        with pytest.raises(ParameterError):
            SketchedRidgeSolver(k=9).prepare(small_problem)


class TestSolve:
    """Test end-to-end solves."""

    def test_converges_to_minimum(self):
        problem = random_problem(d=10, n=40, lam=0.05, seed=2)
        w_star, L_star = _minimum(problem)
        cfg = SvrgConfig(epochs=30, seed=0)
        w, trace, diagnostics = sketched_preconditioned_svrg(problem, 4, cfg, seed=1, reference_value=L_star)
        assert objective(problem, w) - L_star < 1e-6
        assert trace.final.suboptimality == pytest.approx(objective(problem, w) - L_star, abs=1e-12)
        assert diagnostics.method == "sketched-svrg"
        assert diagnostics.singular_values.shape == (4,)
        assert set(diagnostics.timings) == {"sketch", "precondition", "svrg"}

    def test_k_equal_dimension(self):
        """With k = d the preconditioner is exact and the problem is well conditioned."""
        problem = random_problem(d=5, n=30, lam=0.01, seed=3)
        _, L_star = _minimum(problem)
        w, _, _ = sketched_preconditioned_svrg(problem, 5, SvrgConfig(epochs=20, seed=0), seed=0)
        assert objective(problem, w) - L_star < 1e-8

    def test_rank_matched_sketch_on_low_rank_data(self, rng):
        """Test that k = rank(X_bar) leaves a conditioned problem within d + k when lambda_k = lambda."""
        d, n, lam = 10, 40, 0.01
        left, _ = np.linalg.qr(rng.standard_normal((d, 3)))
        right, _ = np.linalg.qr(rng.standard_normal((n, 3)))
        sigma = np.sqrt(n * lam * np.array([4.0, 2.25, 1.0]))
        problem = RidgeProblem(DataMatrix((left * sigma) @ right.T), rng.standard_normal(n), lam)

        prepared = SketchedRidgeSolver(k=3, seed=0).prepare(problem)
        kappa = conditioned_condition_number(problem.data, lam, prepared.preconditioner)
        assert not prepared.sketch.rank_reduced
        assert kappa == pytest.approx(exact_condition_bound(SpectrumSummary.from_data(problem.data, lam), 3),
                                      rel=1e-8)
        assert kappa <= d + 3 + 1e-8

    def test_prepare_reused_across_runs(self, small_problem):
        solver = SketchedRidgeSolver(k=3, seed=4)
        prepared = solver.prepare(small_problem)
        beta_hat = prepared.components.beta_hat
        results = [solver.run(prepared, SvrgConfig(epochs=3, step_size=s / beta_hat, seed=0, mode=SvrgMode.TUNED))
                   for s in (0.5, 1.0)]
        assert results[0][2].step_size == pytest.approx(0.5 / beta_hat)
        assert results[1][2].epoch_length == 2 * prepared.components.n_components

    def test_lazy_and_dense_agree(self):
        problem = random_problem(d=12, n=30, lam=0.1, seed=6, density=0.4)
        cfg = SvrgConfig(epochs=3, seed=2)
        w_dense, _, _ = sketched_preconditioned_svrg(problem, 3, cfg, seed=1, mode="dense")
        w_lazy, _, d_lazy = sketched_preconditioned_svrg(problem, 3, cfg, seed=1, mode="lazy")
        assert d_lazy.mode == "lazy"
        np.testing.assert_allclose(w_lazy, w_dense, atol=1e-8)

    def test_plain_svrg(self, small_problem):
        _, L_star = _minimum(small_problem)
        w, trace, diagnostics = plain_svrg(small_problem, SvrgConfig(epochs=40, seed=0), L_star)
        assert diagnostics.method == "svrg"
        assert trace.final.suboptimality < trace.records[0].suboptimality
        assert objective(small_problem, w) >= L_star - 1e-12


class TestLogLevel:
    """Test the per-call log level."""

    def test_log_level_restored(self, small_problem):
        package_logger = logging.getLogger("sketchridge")
        before = package_logger.level
        SketchedRidgeSolver(k=2, seed=0).solve(small_problem, SvrgConfig(epochs=1, seed=0), log_level="debug")
        assert package_logger.level == before

    def test_debug_messages_emitted(self, small_problem, caplog):
        with caplog.at_level(logging.DEBUG):
            SketchedRidgeSolver(k=2, seed=0).solve(small_problem, SvrgConfig(epochs=1, seed=0), log_level="DEBUG")
        assert "Block Lanczos" in caplog.text

    def test_invalid_log_level_warns(self, small_problem, caplog):
        with caplog.at_level(logging.WARNING, logger="sketchridge"):
            SketchedRidgeSolver(k=2, seed=0).solve(small_problem, SvrgConfig(epochs=1, seed=0), log_level="LOUD")
        assert "Invalid log level" in caplog.text
