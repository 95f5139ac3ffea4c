"""Finite-sum problems and the SVRG solver."""

from .base_problem import FiniteSumProblem
from .ridge import RidgeComponents, RidgeProblem, objective, ridge_components
from .preconditioned import ApplicationMode, PreconditionedComponents, preconditioned_components
from .svrg import ConvergenceTrace, SvrgConfig, SvrgMode, sample_index, svrg_solve, theoretical_params

__all__ = [
    "FiniteSumProblem",
    "RidgeProblem",
    "RidgeComponents",
    "objective",
    "ridge_components",
    "ApplicationMode",
    "PreconditionedComponents",
    "preconditioned_components",
    "SvrgConfig",
    "SvrgMode",
    "ConvergenceTrace",
    "sample_index",
    "svrg_solve",
    "theoretical_params",
]
