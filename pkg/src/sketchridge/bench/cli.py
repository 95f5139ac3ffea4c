"""
Command-line front end: ``gen``, ``solve``, ``bench converge`` and ``bench ratio``.

Exit codes: 0 on success, 1 on usage or parameter errors, 2 on runtime errors
(including divergence).
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence, Tuple

from .. import __version__
from ..config import SketchRidgeConfig
from ..data.corpus import read_eigenvalues, write_sparse_corpus
from ..data.synthetic import Decay, LabeledDataset, SyntheticSpec, generate_synthetic
from ..exceptions import DivergenceError, SketchRidgeError, ValidationError
from ..optim.preconditioned import ApplicationMode
from ..optim.ridge import objective, ridge_components
from ..solver import SketchedRidgeSolver, plain_svrg
from .harness import (
    CONVERGENCE_HEADER,
    RATIO_HEADER,
    BenchConfig,
    load_dataset,
    reference_minimum,
    run_convergence,
    run_ratio_curve,
    write_csv,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class UsageError(Exception):
    """Raised for option combinations argparse cannot express; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _seed_list(text: str) -> Tuple[int, ...]:
    try:
        seeds = tuple(int(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed list '{text}'")
    if not seeds:
        raise argparse.ArgumentTypeError("at least one seed is required")
    return seeds


def _add_source(parser: argparse.ArgumentParser, required: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--data", type=Path, help="sparse corpus file (label idx:val ...)")
    group.add_argument("--synthetic", choices=[d.value for d in Decay], help="synthetic singular-value decay")
    parser.add_argument("--n", type=int, default=500, help="number of synthetic points")
    parser.add_argument("--d", type=int, default=100, help="number of synthetic features")
    parser.add_argument("--noise", type=float, default=0.1, help="synthetic label noise std")
    parser.add_argument("--data-seed", type=int, default=0, help="seed of the synthetic instance")


def _add_solver_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--lambda", dest="lam", type=float, default=1e-6, help="regularization")
    parser.add_argument("--k", type=int, default=30, help="sketch rank")
    parser.add_argument("--epochs", type=int, default=20, help="SVRG epochs")
    steps = parser.add_mutually_exclusive_group()
    steps.add_argument("--eta", type=float, help="fixed step size")
    steps.add_argument("--tune", action="store_true", help="pick eta from the grid 2^j / beta_hat, j in -3..3")
    parser.add_argument("--mode", choices=[m.value for m in ApplicationMode], default="auto",
                        help="preconditioner application mode")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sketchridge", description="Sketched preconditioned SVRG for ridge regression")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], type=str.upper,
                        help="logging level (default from SKETCHRIDGE_LOG_LEVEL)")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = commands.add_parser("gen", help="write a synthetic dataset as a sparse corpus")
    gen.add_argument("--synthetic", choices=[d.value for d in Decay], required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--d", type=int, required=True)
    gen.add_argument("--noise", type=float, default=0.1)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", type=Path, required=True)

    solve = commands.add_parser("solve", help="run one solver and print the final objective and timings")
    _add_source(solve)
    _add_solver_options(solve)
    solve.add_argument("--method", choices=["sketched", "svrg"], default="sketched")
    solve.add_argument("--seed", type=int, default=0)

    bench = commands.add_parser("bench", help="benchmarks emitting CSV")
    bench_commands = bench.add_subparsers(dest="bench_command", required=True, parser_class=_Parser)

    converge = bench_commands.add_parser("converge", help="suboptimality per epoch for svrg and sketched-svrg")
    _add_source(converge)
    _add_solver_options(converge)
    converge.add_argument("--seed", type=_seed_list, default=(0,), help="seed or comma-separated seeds")
    converge.add_argument("--out", type=Path, help="CSV output (default stdout)")

    ratio = bench_commands.add_parser("ratio", help="predicted speed-up as a function of k")
    _add_source(ratio, required=False)
    ratio.add_argument("--eigenvalues", type=Path, help="file of eigenvalues of C")
    ratio.add_argument("--k-max", type=int, default=30)
    ratio.add_argument("--lambda", dest="lam", type=float, default=1.0)
    ratio.add_argument("--out", type=Path, help="CSV output (default stdout)")
    return parser


def _configure_logging(level: Optional[str]) -> None:
    level = level or SketchRidgeConfig.get_log_level()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format=LOG_FORMAT, stream=sys.stderr)


def _source(args: argparse.Namespace):
    if args.data is not None:
        return args.data
    return SyntheticSpec(n=args.n, d=args.d, decay=args.synthetic, noise_std=args.noise, seed=args.data_seed)


def _load(args: argparse.Namespace) -> LabeledDataset:
    return load_dataset(_source(args))


def _cmd_gen(args: argparse.Namespace) -> int:
    spec = SyntheticSpec(n=args.n, d=args.d, decay=args.synthetic, noise_std=args.noise, seed=args.seed)
    write_sparse_corpus(generate_synthetic(spec), args.out)
    print(f"wrote {spec.n} points with {spec.d} features to {args.out}")
    return EXIT_OK


def _cmd_solve(args: argparse.Namespace) -> int:
    problem = _load(args).to_problem(args.lam)
    _, reference = reference_minimum(problem)
    cfg = BenchConfig(source=_source(args), lam=args.lam, k=args.k, epochs=args.epochs, seeds=(args.seed,),
                      step_size=args.eta, tune=args.tune, mode=args.mode)

    if args.method == "svrg":
        solver, prepared = None, None
        grid = cfg.step_grid(ridge_components(problem).beta_hat)
    else:
        solver = SketchedRidgeSolver(args.k, mode=args.mode, seed=args.seed)
        prepared = solver.prepare(problem)
        grid = cfg.step_grid(prepared.components.beta_hat)

    best = None
    for step_size in grid:
        svrg_cfg = cfg.svrg_config(step_size, args.seed, problem.n_samples + problem.n_features)
        try:
            if solver is None:
                result = plain_svrg(problem, svrg_cfg, reference)
            else:
                result = solver.run(prepared, svrg_cfg, reference)
        except DivergenceError as e:
            if len(grid) == 1:
                raise
            logger.info("Skipping diverged run: %s", e)
            continue
        if best is None or result[1].final.objective < best[1].final.objective:
            best = result
    if best is None:
        raise DivergenceError("Every step size diverged")

    weights, trace, diagnostics = best
    final = objective(problem, weights)
    print(f"method: {diagnostics.method}")
    print(f"final objective: {final!r}")
    print(f"suboptimality: {max(0.0, final - reference)!r}")
    print(f"epochs: {len(trace)}  epoch length: {diagnostics.epoch_length}  step size: {diagnostics.step_size!r}")
    for phase, seconds in diagnostics.timings.items():
        print(f"time {phase}: {1000.0 * seconds:.3f} ms")
    return EXIT_OK


def _cmd_converge(args: argparse.Namespace) -> int:
    cfg = BenchConfig(source=_source(args), lam=args.lam, k=args.k, epochs=args.epochs, seeds=args.seed,
                      step_size=args.eta, tune=args.tune, mode=args.mode, out=args.out)
    rows = run_convergence(cfg)
    write_csv(rows, CONVERGENCE_HEADER, path=cfg.out, stream=sys.stdout)
    return EXIT_OK


def _cmd_ratio(args: argparse.Namespace) -> int:
    if args.eigenvalues is not None:
        if args.data is not None or args.synthetic is not None:
            raise UsageError("--eigenvalues cannot be combined with --data or --synthetic")
        source = read_eigenvalues(args.eigenvalues)
    elif args.data is not None or args.synthetic is not None:
        source = _load(args)
    else:
        raise UsageError("one of --eigenvalues, --data or --synthetic is required")
    rows = run_ratio_curve(source, args.k_max, lam=args.lam)
    write_csv(rows, RATIO_HEADER, path=args.out, stream=sys.stdout)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the ``sketchridge`` command; returns the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.log_level)

    handlers = {"gen": _cmd_gen, "solve": _cmd_solve}
    try:
        if args.command == "bench":
            handler = _cmd_converge if args.bench_command == "converge" else _cmd_ratio
        else:
            handler = handlers[args.command]
        return handler(args)
    except (UsageError, ValidationError) as e:
        parser.print_usage(sys.stderr)
        print(f"sketchridge: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (SketchRidgeError, OSError) as e:
        logger.error("Run failed: %s", e)
        print(f"sketchridge: error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
