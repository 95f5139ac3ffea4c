"""
Sparse text corpora: one data point per line, ``label idx:val idx:val ...``.

Indices are 1-based and strictly increasing within a line; ``#`` starts a
comment that runs to the end of the line. Parsing and writing go through the
svmlight codec in scikit-learn; when the loader rejects a file, the file is
scanned line by line to report where.
"""

import logging
from pathlib import Path
from typing import List, NoReturn, Optional, Tuple, Union

import numpy as np
from sklearn.datasets import dump_svmlight_file, load_svmlight_file

from ..core.matrix import DataMatrix
from ..core.utils import as_vector
from ..exceptions import CorpusParseError, DegenerateDataError
from .synthetic import LabeledDataset

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _decoded_lines(path: PathLike):
    """Yield (line_number, text without comment) decoding each line separately."""
    with open(path, "rb") as f:
        for line_number, raw in enumerate(f, start=1):
            try:
                text = raw.split(b"#", 1)[0].decode("utf-8")
            except UnicodeDecodeError as e:
                raise CorpusParseError(f"{path}:{line_number}: invalid UTF-8 ({e.reason})",
                                       line_number=line_number, path=str(path))
            yield line_number, text.strip()


def _line_problem(tokens: List[str], n_features: Optional[int]) -> Optional[str]:
    try:
        label = float(tokens[0])
    except ValueError:
        return f"invalid label '{tokens[0]}'"
    if not np.isfinite(label):
        return "non-finite label"
    previous = 0
    for token in tokens[1:]:
        idx_text, sep, val_text = token.partition(":")
        if not sep:
            return f"expected idx:val, got '{token}'"
        try:
            idx, value = int(idx_text), float(val_text)
        except ValueError:
            return f"malformed entry '{token}'"
        if idx < 1:
            return f"feature index {idx} is not 1-based"
        if idx <= previous:
            return f"indices not strictly increasing ({previous} then {idx})"
        if not np.isfinite(value):
            return f"non-finite value in '{token}'"
        if n_features is not None and idx > n_features:
            return f"index {idx} exceeds n_features={n_features}"
        previous = idx
    return None


def _locate_error(path: PathLike, n_features: Optional[int]) -> Tuple[Optional[int], str]:
    for line_number, text in _decoded_lines(path):
        if text:
            problem = _line_problem(text.split(), n_features)
            if problem is not None:
                return line_number, problem
    return None, "rejected by the svmlight loader"


def _raise_parse_error(path: PathLike, n_features: Optional[int], cause: Optional[Exception] = None) -> NoReturn:
    line_number, problem = _locate_error(path, n_features)
    if line_number is not None:
        message = f"{path}:{line_number}: {problem}"
    else:
        message = f"{path}: {cause if cause is not None else problem}"
    raise CorpusParseError(message, line_number=line_number, path=str(path)) from cause


def read_sparse_corpus(path: PathLike, n_features: Optional[int] = None) -> LabeledDataset:
    """
    Read a sparse corpus into a column-per-point dataset.

    Args:
        path: Corpus file
        n_features: Fixed feature count; defaults to the largest index seen

    Returns:
        LabeledDataset backed by CSC storage

    Raises:
        CorpusParseError: malformed line, with its line number
        DegenerateDataError: no points or no features
    """
    path_str = str(path)
    try:
        X, labels = load_svmlight_file(path_str, n_features=n_features, dtype=np.float64, zero_based=False)
    except ValueError as e:
        _raise_parse_error(path_str, n_features, e)
    if not (np.all(np.isfinite(X.data)) and np.all(np.isfinite(labels))):
        _raise_parse_error(path_str, n_features)

    if X.shape[0] == 0:
        raise DegenerateDataError(f"Corpus {path_str} contains no data points")
    d = n_features if n_features is not None else (int(X.indices.max()) + 1 if X.nnz else 0)
    if d < 1:
        raise DegenerateDataError(f"Corpus {path_str} contains no features")

    storage = X[:, :d].T.tocsc()
    logger.info("Finished. %d points, %d features, %d nonzeros", X.shape[0], d, storage.nnz)
    return LabeledDataset(DataMatrix(storage), np.asarray(labels, dtype=np.float64), provenance=Path(path))


def write_sparse_corpus(ds: LabeledDataset, path: PathLike) -> None:
    """Write a dataset in the sparse corpus format (values with 16 significant digits)."""
    data = ds.data
    if data.is_sparse:
        rows = (data.scale * data.storage).T.tocsr()
        rows.eliminate_zeros()
    else:
        rows = data.to_dense().T
    dump_svmlight_file(rows, ds.labels, str(path), zero_based=False)
    logger.info("Wrote %d points to %s", ds.n_samples, path)


def read_eigenvalues(path: PathLike) -> np.ndarray:
    """
    Read a whitespace- or newline-separated list of eigenvalues.

    Returns:
        Eigenvalues sorted in descending order
    """
    values: List[float] = []
    for line_number, text in _decoded_lines(path):
        for token in text.replace(",", " ").split():
            try:
                values.append(float(token))
            except ValueError:
                raise CorpusParseError(f"{path}:{line_number}: invalid eigenvalue '{token}'",
                                       line_number=line_number, path=str(path))
    if not values:
        raise DegenerateDataError(f"Eigenvalue file {path} is empty")
    return np.sort(as_vector(values, name="eigenvalues"))[::-1].copy()


def average_norm_normalize(ds: LabeledDataset) -> LabeledDataset:
    """
    Divide every column by the mean column norm (1/n) sum ||x_i||.

    The storage is shared; only the matrix scale changes.
    """
    mean_norm = float(np.mean(ds.data.column_norms()))
    if mean_norm == 0.0:
        raise DegenerateDataError("Cannot normalize a dataset whose columns are all zero")
    data = ds.data.with_scale(ds.data.scale / mean_norm)
    logger.debug("Normalized by average column norm %.6g", mean_norm)
    return LabeledDataset(data, ds.labels.copy(), provenance=ds.provenance)
