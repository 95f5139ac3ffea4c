"""Synthetic instances and sparse corpus I/O."""

from .synthetic import Decay, LabeledDataset, SyntheticSpec, generate_synthetic, spectrum_matrix
from .corpus import average_norm_normalize, read_eigenvalues, read_sparse_corpus, write_sparse_corpus

__all__ = [
    "Decay",
    "SyntheticSpec",
    "LabeledDataset",
    "generate_synthetic",
    "spectrum_matrix",
    "read_sparse_corpus",
    "write_sparse_corpus",
    "read_eigenvalues",
    "average_norm_normalize",
]
