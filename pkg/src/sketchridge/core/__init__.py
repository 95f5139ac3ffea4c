"""Dense and sparse kernels, the Block Lanczos sketch and preconditioners."""

from .matrix import DataMatrix, gaussian_matrix
from .linalg import fix_signs, orthonormalize, orthonormalize_against, small_svd, sym_eigs
from .sketch_svd import LanczosConfig, SketchedSVD, block_lanczos, exact_truncated_svd, residual_spectral_norm
from .precond import (
    Preconditioner,
    PreconditionerKind,
    SpectrumSummary,
    avg_condition_number,
    build_exact,
    build_identity,
    build_optimal,
    build_sketched,
    conditioned_condition_number,
    theoretical_ratio,
)

__all__ = [
    "DataMatrix",
    "gaussian_matrix",
    "orthonormalize",
    "orthonormalize_against",
    "fix_signs",
    "small_svd",
    "sym_eigs",
    "LanczosConfig",
    "SketchedSVD",
    "block_lanczos",
    "exact_truncated_svd",
    "residual_spectral_norm",
    "Preconditioner",
    "PreconditionerKind",
    "SpectrumSummary",
    "build_sketched",
    "build_exact",
    "build_identity",
    "build_optimal",
    "avg_condition_number",
    "conditioned_condition_number",
    "theoretical_ratio",
]
