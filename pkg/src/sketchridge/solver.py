import logging
import time
from dataclasses import dataclass, field
from datetime import datetime
from typing import Dict, Optional, Tuple, Union

import numpy as np

from .core.precond import Preconditioner, build_sketched
from .core.sketch_svd import LanczosConfig, SketchedSVD, block_lanczos
from .core.utils import SeedLike, check_count
from .exceptions import ParameterError
from .optim.preconditioned import ApplicationMode, PreconditionedComponents, preconditioned_components
from .optim.ridge import RidgeProblem, ridge_components
from .optim.svrg import ConvergenceTrace, SvrgConfig, svrg_solve

logger = logging.getLogger(__name__)

PACKAGE_LOGGER = "sketchridge"


@dataclass
class SolveDiagnostics:
    """What a solver run reports besides the weights."""

    run_id: str
    method: str
    singular_values: Optional[np.ndarray] = None
    beta_hat: float = 0.0
    strong_convexity: float = 0.0
    epoch_length: int = 0
    step_size: float = 0.0
    q: int = 0
    rank_reduced: bool = False
    mode: Optional[str] = None
    timings: Dict[str, float] = field(default_factory=dict)


@dataclass
class PreparedProblem:
    """Output of the preconditioning phase, reusable across SVRG runs."""

    components: PreconditionedComponents
    preconditioner: Preconditioner
    sketch: SketchedSVD
    timings: Dict[str, float]


class SketchedRidgeSolver:
    """Sketched preconditioned SVRG for ridge regression."""

    def __init__(
        self,
        k: int,
        eps_prime: float = 0.5,
        mode: Union[str, ApplicationMode] = ApplicationMode.AUTO,
        seed: SeedLike = None,
        q_override: Optional[int] = None,
        strong_convexity: Optional[float] = None,
    ):
        """
        Initialize the solver.

        Args:
            k: Sketch rank (1 <= k <= min(d, n))
            eps_prime: Block Lanczos accuracy
            mode: dense, lazy or auto application of the preconditioner
            seed: Seed of the sketch
            q_override: Explicit Krylov block count
            strong_convexity: Override for the preconditioned alpha
        """
        self.k = check_count(k, "k")
        self.eps_prime = eps_prime
        self.mode = ApplicationMode(mode)
        self.seed = seed
        self.q_override = q_override
        self.strong_convexity = strong_convexity
        # Run id like a session id: timestamp with microseconds
        self.run_id = datetime.now().strftime("%Y%m%d_%H%M%S_%f")
        logger.info("SketchedRidgeSolver initialized with run_id: %s, k: %d, mode: %s",
                    self.run_id, self.k, self.mode.value)

    def prepare(self, problem: RidgeProblem) -> PreparedProblem:
        """Sketch X_bar, build the preconditioner and the preconditioned components."""
        d, n = problem.n_features, problem.n_samples
        if self.k > min(d, n):
            raise ParameterError(f"k={self.k} exceeds min(d, n)={min(d, n)}", name="k")
        timings: Dict[str, float] = {}

        start = time.perf_counter()
        cfg = LanczosConfig(k=self.k, eps_prime=self.eps_prime, seed=self.seed, q_override=self.q_override)
        sketch = block_lanczos(problem.data.averaged(), cfg)
        timings["sketch"] = time.perf_counter() - start

        start = time.perf_counter()
        preconditioner = build_sketched(sketch, problem.lam)
        components = preconditioned_components(problem, preconditioner, mode=self.mode,
                                               strong_convexity=self.strong_convexity)
        timings["precondition"] = time.perf_counter() - start
        return PreparedProblem(components=components, preconditioner=preconditioner, sketch=sketch, timings=timings)

    def run(
        self,
        prepared: PreparedProblem,
        cfg: SvrgConfig,
        reference_value: Optional[float] = None,
    ) -> Tuple[np.ndarray, ConvergenceTrace, SolveDiagnostics]:
        """Run SVRG on prepared components from w~_0 = 0 and map the result back."""
        components = prepared.components
        resolved = cfg.resolve(components)
        start = time.perf_counter()
        w_tilde, trace = svrg_solve(components, resolved, np.zeros(components.dimension), reference_value)
        timings = dict(prepared.timings)
        timings["svrg"] = time.perf_counter() - start

        weights = components.to_original(w_tilde)
        diagnostics = SolveDiagnostics(
            run_id=self.run_id,
            method="sketched-svrg",
            singular_values=prepared.sketch.singular_values.copy(),
            beta_hat=components.beta_hat,
            strong_convexity=components.strong_convexity,
            epoch_length=int(resolved.epoch_length),
            step_size=float(resolved.step_size),
            q=prepared.sketch.q,
            rank_reduced=prepared.sketch.rank_reduced,
            mode=components.mode.value,
            timings=timings,
        )
        return weights, trace, diagnostics

    def solve(
        self,
        problem: RidgeProblem,
        cfg: SvrgConfig,
        reference_value: Optional[float] = None,
        log_level: Optional[str] = None,
    ) -> Tuple[np.ndarray, ConvergenceTrace, SolveDiagnostics]:
        """
        Solve a ridge problem end to end.

        Args:
            problem: Ridge problem
            cfg: SVRG configuration (unset fields resolved on the preconditioned problem)
            reference_value: min L, when known, for suboptimality records
            log_level: Optional logging level ('DEBUG', 'INFO', ...) for this call only

        Returns:
            (weights in original coordinates, trace, diagnostics)
        """
        package_logger = logging.getLogger(PACKAGE_LOGGER)
        original_level = None
        if log_level:
            original_level = package_logger.level
            try:
                package_logger.setLevel(getattr(logging, log_level.upper()))
                logger.info("Log level set to %s for this run", log_level.upper())
            except AttributeError:
                original_level = None
                logger.warning("Invalid log level '%s', using default level", log_level)
        try:
            prepared = self.prepare(problem)
            return self.run(prepared, cfg, reference_value)
        finally:
            if original_level is not None:
                package_logger.setLevel(original_level)
                logger.debug("Log level restored to original setting")


def sketched_preconditioned_svrg(
    p: RidgeProblem,
    k: int,
    cfg: SvrgConfig,
    seed: SeedLike = None,
    mode: Union[str, ApplicationMode] = ApplicationMode.AUTO,
    reference_value: Optional[float] = None,
) -> Tuple[np.ndarray, ConvergenceTrace, SolveDiagnostics]:
    """
    Sketched preconditioned SVRG.

    Runs Block Lanczos on X_bar with eps' = 1/2, builds the sketched
    preconditioner, runs SVRG on the preconditioned decomposition from 0 and
    returns w^ = P^{-1/2} w~_S together with the trace and diagnostics.
    """
    return SketchedRidgeSolver(k, mode=mode, seed=seed).solve(p, cfg, reference_value)


def plain_svrg(
    p: RidgeProblem,
    cfg: SvrgConfig,
    reference_value: Optional[float] = None,
) -> Tuple[np.ndarray, ConvergenceTrace, SolveDiagnostics]:
    """SVRG on the unpreconditioned (n + d)-component decomposition from w_0 = 0."""
    components = ridge_components(p)
    resolved = cfg.resolve(components)
    start = time.perf_counter()
    weights, trace = svrg_solve(components, resolved, np.zeros(p.n_features), reference_value)
    diagnostics = SolveDiagnostics(
        run_id=datetime.now().strftime("%Y%m%d_%H%M%S_%f"),
        method="svrg",
        beta_hat=components.beta_hat,
        strong_convexity=components.strong_convexity,
        epoch_length=int(resolved.epoch_length),
        step_size=float(resolved.step_size),
        timings={"svrg": time.perf_counter() - start},
    )
    return weights, trace, diagnostics
