"""
Benchmark harness: reference minimizer, convergence curves and ratio curves.

Independent (method, seed) runs execute concurrently in worker threads, bounded
by a semaphore; rows are assembled afterwards in (method, seed, epoch) order.
"""

import asyncio
import csv
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg
from scipy.sparse.linalg import LinearOperator, cg

from ..config import SketchRidgeConfig
from ..core.precond import SpectrumSummary, theoretical_ratio
from ..core.utils import check_count, check_positive
from ..data.corpus import average_norm_normalize, read_sparse_corpus
from ..data.synthetic import LabeledDataset, SyntheticSpec, generate_synthetic
from ..exceptions import DivergenceError, ParameterError
from ..optim.preconditioned import ApplicationMode
from ..optim.ridge import RidgeProblem, objective, ridge_components
from ..optim.svrg import ConvergenceTrace, SvrgConfig, SvrgMode
from ..solver import SketchedRidgeSolver, plain_svrg

logger = logging.getLogger(__name__)

METHODS = ("svrg", "sketched-svrg")
STEP_EXPONENTS = tuple(range(-3, 4))
CONVERGENCE_HEADER = ("method", "seed", "epoch", "suboptimality", "elapsed_ms")
RATIO_HEADER = ("k", "ratio")


class ConvergenceRow(NamedTuple):
    method: str
    seed: int
    epoch: int
    suboptimality: float
    elapsed_ms: float


class RatioRow(NamedTuple):
    k: int
    ratio: float


def load_dataset(source: Union[SyntheticSpec, Path, str]) -> LabeledDataset:
    """Generate a synthetic instance, or read and average-norm normalize a corpus."""
    if isinstance(source, SyntheticSpec):
        return generate_synthetic(source)
    return average_norm_normalize(read_sparse_corpus(source))


@dataclass(frozen=True)
class BenchConfig:
    """
    One benchmark run.

    ``step_size`` fixes eta for both methods; otherwise ``tune`` selects the
    best of the grid {2^j / beta_hat : j in -3..3} per method and seed, and
    with ``tune`` off eta = 0.1 / beta_hat is used. The epoch length is
    m = 2(n + d) in every case.
    """

    source: Union[SyntheticSpec, Path, str]
    lam: float
    k: int
    epochs: int
    seeds: Tuple[int, ...] = (0,)
    step_size: Optional[float] = None
    tune: bool = True
    mode: ApplicationMode = ApplicationMode.AUTO
    out: Optional[Path] = None
    max_workers: int = field(default_factory=SketchRidgeConfig.get_max_workers)

    def __post_init__(self):
        check_positive(self.lam, "lambda")
        check_count(self.k, "k")
        check_count(self.epochs, "epochs")
        check_count(self.max_workers, "max_workers")
        if not self.seeds:
            raise ParameterError("At least one seed is required", name="seeds")
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        object.__setattr__(self, "mode", ApplicationMode(self.mode))
        if self.step_size is not None:
            check_positive(self.step_size, "eta")

    def load_dataset(self) -> LabeledDataset:
        return load_dataset(self.source)

    def step_grid(self, beta_hat: float) -> List[Optional[float]]:
        if self.step_size is not None:
            return [self.step_size]
        if self.tune:
            return [2.0 ** j / beta_hat for j in STEP_EXPONENTS]
        return [None]

    def svrg_config(self, step_size: Optional[float], seed, n_components: int) -> SvrgConfig:
        """Benchmark SVRG settings: m = 2N always, eta = 0.1 / beta_hat unless a step size is given."""
        epoch_length = 2 * n_components
        if step_size is None:
            return SvrgConfig(epochs=self.epochs, epoch_length=epoch_length, seed=seed, mode=SvrgMode.THEORETICAL)
        return SvrgConfig(epochs=self.epochs, epoch_length=epoch_length, step_size=step_size, seed=seed,
                          mode=SvrgMode.TUNED)


def reference_minimum(p: RidgeProblem) -> Tuple[np.ndarray, float]:
    """
    Minimizer of L and its value.

    Solves (C + lambda I) w = (1/n) sum y_i x_i by a dense Cholesky solve when
    d is within the direct-solve guard, and by conjugate gradients otherwise.

    Returns:
        (w*, L*)
    """
    rhs = p.correlation_rhs()
    d = p.n_features
    averaged = p.data.averaged()
    if d <= SketchRidgeConfig.get_direct_solve_guard():
        system = averaged.gram()
        system[np.diag_indices_from(system)] += p.lam
        w_star = linalg.solve(system, rhs, assume_a="pos")
    else:
        logger.warning("d=%d exceeds the direct-solve guard, falling back to conjugate gradients", d)
        operator = LinearOperator(
            (d, d), matvec=lambda v: averaged.matvec(averaged.rmatvec(np.ravel(v))) + p.lam * np.ravel(v),
            dtype=np.float64,
        )
        w_star, info = cg(operator, rhs, rtol=1e-12, atol=0.0, maxiter=10 * d)
        if info != 0:
            logger.warning("Conjugate gradients stopped after %d iterations before reaching tolerance", info)
    return w_star, objective(p, w_star)


def _rows(method: str, seed: int, start_value: float, reference: float,
          trace: ConvergenceTrace, offset_ms: float) -> List[ConvergenceRow]:
    rows = [ConvergenceRow(method, seed, 0, max(0.0, start_value - reference), offset_ms)]
    for record in trace:
        rows.append(ConvergenceRow(method, seed, record.epoch, max(0.0, record.objective - reference),
                                   offset_ms + 1000.0 * record.elapsed_seconds))
    return rows


def _best_trace(runs: Iterable[Tuple[Optional[float], ConvergenceTrace]], method: str, seed: int):
    best = None
    for step_size, trace in runs:
        if best is None or trace.final.objective < best[1].final.objective:
            best = (step_size, trace)
    if best is None:
        raise DivergenceError(f"Every step size diverged for {method} (seed {seed})")
    logger.info("%s seed %d: selected step size %s", method, seed, best[0])
    return best[1]


def _run_method(cfg: BenchConfig, problem: RidgeProblem, method: str, seed: int,
                reference: float) -> List[ConvergenceRow]:
    sketch_seed, sampling_seed = np.random.SeedSequence(seed).spawn(2)
    start_value = objective(problem, np.zeros(problem.n_features))
    n_components = problem.n_samples + problem.n_features
    runs = []

    if method == "svrg":
        beta_hat = ridge_components(problem).beta_hat
        for step_size in cfg.step_grid(beta_hat):
            try:
                _, trace, _ = plain_svrg(problem, cfg.svrg_config(step_size, sampling_seed, n_components), reference)
            except DivergenceError as e:
                logger.info("Skipping diverged run: %s", e)
                continue
            runs.append((step_size, trace))
        return _rows(method, seed, start_value, reference, _best_trace(runs, method, seed), 0.0)

    solver = SketchedRidgeSolver(cfg.k, mode=cfg.mode, seed=sketch_seed)
    started = time.perf_counter()
    prepared = solver.prepare(problem)
    prepare_ms = 1000.0 * (time.perf_counter() - started)
    for step_size in cfg.step_grid(prepared.components.beta_hat):
        try:
            _, trace, _ = solver.run(prepared, cfg.svrg_config(step_size, sampling_seed, n_components), reference)
        except DivergenceError as e:
            logger.info("Skipping diverged run: %s", e)
            continue
        runs.append((step_size, trace))
    return _rows(method, seed, start_value, reference, _best_trace(runs, method, seed), prepare_ms)


async def run_convergence_async(
    cfg: BenchConfig,
    problem: Optional[RidgeProblem] = None,
    methods: Sequence[str] = METHODS,
) -> List[ConvergenceRow]:
    """
    Convergence rows for every (method, seed).

    Args:
        cfg: Benchmark configuration
        problem: Ridge problem to use instead of loading cfg.source
        methods: Subset of ("svrg", "sketched-svrg")

    Returns:
        Rows sorted by (method, seed, epoch)
    """
    unknown = set(methods) - set(METHODS)
    if unknown:
        raise ParameterError(f"Unknown methods: {sorted(unknown)}", name="methods")
    if problem is None:
        problem = cfg.load_dataset().to_problem(cfg.lam)
    _, reference = reference_minimum(problem)
    logger.info("Benchmark started: d=%d, n=%d, lambda=%g, L*=%.12g",
                problem.n_features, problem.n_samples, problem.lam, reference)

    semaphore = asyncio.Semaphore(cfg.max_workers)

    async def run_one(method: str, seed: int) -> List[ConvergenceRow]:
        async with semaphore:
            return await asyncio.to_thread(_run_method, cfg, problem, method, seed, reference)

    pairs = [(method, seed) for method in methods for seed in cfg.seeds]
    results = await asyncio.gather(*(run_one(m, s) for m, s in pairs), return_exceptions=True)

    rows: List[ConvergenceRow] = []
    for (method, seed), result in zip(pairs, results):
        if isinstance(result, BaseException):
            logger.error("Run %s seed %d failed: %s", method, seed, result)
            raise result
        rows.extend(result)
    rows.sort(key=lambda r: (r.method, r.seed, r.epoch))
    logger.info("Benchmark finished: %d rows", len(rows))
    return rows


def run_convergence(
    cfg: BenchConfig,
    problem: Optional[RidgeProblem] = None,
    methods: Sequence[str] = METHODS,
) -> List[ConvergenceRow]:
    """Synchronous wrapper around run_convergence_async."""
    return asyncio.run(run_convergence_async(cfg, problem, methods))


def run_ratio_curve(source: Union[SpectrumSummary, LabeledDataset, np.ndarray], k_max: int,
                    lam: float = 1.0) -> List[RatioRow]:
    """
    Rows (k, ratio) for k = 1..k_max.

    Args:
        source: Spectrum, eigenvalue array, or dataset (exact spectrum at test scale)
        k_max: Largest k, at most the dimension
        lam: Regularization carried by a spectrum built here (the ratio ignores it)
    """
    if isinstance(source, SpectrumSummary):
        spectrum = source
    elif isinstance(source, LabeledDataset):
        spectrum = SpectrumSummary.from_data(source.data, lam)
    else:
        spectrum = SpectrumSummary(np.sort(np.asarray(source, dtype=np.float64))[::-1], lam)
    check_count(k_max, "k_max")
    if k_max > spectrum.dimension:
        raise ParameterError(f"k_max={k_max} exceeds dimension {spectrum.dimension}", name="k_max")
    return [RatioRow(k, theoretical_ratio(spectrum, k)) for k in range(1, k_max + 1)]


def write_csv(rows: Iterable[tuple], header: Sequence[str], path: Union[str, Path, None] = None, stream=None) -> None:
    """
    Write rows with a header line; floats use repr so no locale applies.

    Args:
        rows: Row tuples
        header: Column names
        path: Output file (used when given)
        stream: Text stream used when no path is given
    """

    def emit(handle) -> None:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])

    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as f:
            emit(f)
        logger.info("Wrote CSV to %s", path)
    else:
        emit(stream)
