"""
sketchridge - Sketched preconditioning for ridge regression

Randomized Block Lanczos low-rank sketches, the preconditioner they induce,
and importance-sampled SVRG on the preconditioned problem.
"""

__version__ = "0.1.0"

# Public API exports
from .solver import SketchedRidgeSolver, SolveDiagnostics, plain_svrg, sketched_preconditioned_svrg
from .optim.ridge import RidgeProblem, objective
from .optim.svrg import ConvergenceTrace, SvrgConfig, SvrgMode
from .core.matrix import DataMatrix
from .config import SketchRidgeConfig
from .exceptions import (
    SketchRidgeError,
    ValidationError,
    DimensionError,
    ParameterError,
    EmptyBasisError,
    DegenerateSpectrumError,
    DegenerateDataError,
    ScaleGuardError,
    DivergenceError,
    CorpusParseError,
)

__all__ = [
    "SketchedRidgeSolver",
    "SolveDiagnostics",
    "sketched_preconditioned_svrg",
    "plain_svrg",
    "RidgeProblem",
    "objective",
    "SvrgConfig",
    "SvrgMode",
    "ConvergenceTrace",
    "DataMatrix",
    "SketchRidgeConfig",
    # Errors
    "SketchRidgeError",
    "ValidationError",
    "DimensionError",
    "ParameterError",
    "EmptyBasisError",
    "DegenerateSpectrumError",
    "DegenerateDataError",
    "ScaleGuardError",
    "DivergenceError",
    "CorpusParseError",
]
