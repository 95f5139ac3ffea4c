"""Benchmark harness and command-line front end."""

from .harness import (
    BenchConfig,
    ConvergenceRow,
    RatioRow,
    load_dataset,
    reference_minimum,
    run_convergence,
    run_convergence_async,
    run_ratio_curve,
    write_csv,
)

__all__ = [
    "BenchConfig",
    "ConvergenceRow",
    "RatioRow",
    "load_dataset",
    "reference_minimum",
    "run_convergence",
    "run_convergence_async",
    "run_ratio_curve",
    "write_csv",
]
