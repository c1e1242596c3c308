"""Loading real data sets (samples x genes) from plain CSV files."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace

import numpy as np

from .dual import RegressionProblem

__all__ = ["Dataset", "DatasetError", "load_csv", "save_csv", "standardize"]


class DatasetError(ValueError):
    """Malformed CSV input; the message names the offending cell."""


@dataclass(frozen=True)
class Dataset:
    """Feature matrix and response; arrays are read-only after load.

    ``constant_columns`` flags features that were centered but not scaled
    by :func:`standardize` because their standard deviation is zero.
    """

    features: np.ndarray
    response: np.ndarray
    feature_names: tuple | None = None
    standardized: bool = False
    constant_columns: tuple = ()

    def __post_init__(self):
        X = np.array(self.features, dtype=float)
        y = np.array(self.response, dtype=float).ravel()
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise DatasetError(f"features must be a nonempty matrix, got shape {X.shape}")
        if y.shape[0] != X.shape[0]:
            raise DatasetError("response length does not match the number of rows")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise DatasetError("non-finite values in data set")
        if self.feature_names is not None:
            names = tuple(self.feature_names)
            if len(names) != X.shape[1]:
                raise DatasetError(
                    f"{len(names)} feature names for {X.shape[1]} feature columns")
            object.__setattr__(self, "feature_names", names)
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "response", y)

    @property
    def n(self):
        return self.features.shape[0]

    @property
    def p(self):
        return self.features.shape[1]

    def to_problem(self) -> RegressionProblem:
        return RegressionProblem(self.features, self.response)


def _parse_cell(text, row, col):
    try:
        value = float(text)
    except ValueError:
        raise DatasetError(
            f"row {row}, column {col}: cannot parse {text!r} as a number") from None
    if not math.isfinite(value):
        raise DatasetError(f"row {row}, column {col}: non-finite value {text!r}")
    return value


def load_csv(path, has_header=False, response_column=0, transpose=False):
    """Read a comma-separated numeric table into a :class:`Dataset`.

    Parameters
    ----------
    path : str or path-like
    has_header : bool
        Treat the first line as column names.
    response_column : int
        Column holding the response (negative values count from the end).
        All other columns become features.
    transpose : bool
        The file stores genes as rows and samples as columns.  The numeric
        table is transposed before the response is extracted, so
        ``response_column`` then refers to a row of the file.  Names from
        a header row are discarded in this orientation.

    Row and column numbers in error messages are 1-based file coordinates.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        lines = list(csv.reader(fh))
    header = None
    start = 0
    if has_header:
        if not lines:
            raise DatasetError(f"{path}: empty file")
        header = [h.strip() for h in lines[0]]
        start = 1
    rows = []
    width = None
    for i, line in enumerate(lines[start:], start=start + 1):
        if not line or all(not c.strip() for c in line):
            continue
        if width is None:
            width = len(line)
        elif len(line) != width:
            raise DatasetError(
                f"row {i}: expected {width} fields, found {len(line)}")
        rows.append([_parse_cell(c.strip(), i, j) for j, c in enumerate(line, 1)])
    if not rows:
        raise DatasetError(f"{path}: no data rows")
    table = np.array(rows, dtype=float)
    if header is not None and not transpose and len(header) != table.shape[1]:
        raise DatasetError(
            f"header has {len(header)} names but rows have {table.shape[1]} fields")
    if transpose:
        table = table.T
        header = None
    ncol = table.shape[1]
    if ncol < 2:
        raise DatasetError("need a response column and at least one feature column")
    col = response_column + ncol if response_column < 0 else response_column
    if not 0 <= col < ncol:
        raise DatasetError(f"response column {response_column} out of range for {ncol} columns")
    keep = [j for j in range(ncol) if j != col]
    names = tuple(header[j] for j in keep) if header is not None else None
    return Dataset(table[:, keep], table[:, col], feature_names=names)


def save_csv(dataset: Dataset, path, response_column=0):
    """Write ``dataset`` so that :func:`load_csv` reads it back unchanged."""
    X, y = dataset.features, dataset.response
    table = np.insert(X, response_column, y, axis=1)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if dataset.feature_names is not None:
            names = list(dataset.feature_names)
            names.insert(response_column, "response")
            writer.writerow(names)
        for row in table:
            writer.writerow([repr(float(v)) for v in row])


def standardize(dataset: Dataset) -> Dataset:
    """Center every feature and scale it to unit sample standard deviation.

    Constant columns are only centered and reported in ``constant_columns``.
    """
    X = np.array(dataset.features)
    mean = X.mean(axis=0)
    X -= mean
    sd = X.std(axis=0, ddof=1) if X.shape[0] > 1 else np.zeros(X.shape[1])
    const = sd <= 1e-12 * np.maximum(1.0, np.abs(mean))
    scale = np.where(const, 1.0, sd)
    X /= scale
    X[:, const] = 0.0
    return replace(dataset, features=X, standardized=True,
                   constant_columns=tuple(int(j) for j in np.flatnonzero(const)))
