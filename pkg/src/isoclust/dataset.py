"""Point-set input and output.

Datasets are (n, d) float64 arrays of coordinates, optionally paired with
integer class labels remapped to the contiguous range 0..class_count-1.
"""

from __future__ import annotations

import csv
import io
from typing import Optional

import numpy as np


class DataFormatError(ValueError):
    """Malformed input data: carries a 1-based row and column where known."""


def _parse_rows(rows, label_column: Optional[int], path: str):
    points = []
    raw_labels = []
    width = None
    for row_no, fields in rows:
        fields = [f.strip() for f in fields]
        if not fields or all(f == "" for f in fields):
            continue
        if width is None:
            width = len(fields)
            if label_column is not None and not (0 <= label_column < width):
                raise DataFormatError(
                    f"{path}: label column {label_column} out of range for "
                    f"{width}-column data"
                )
        elif len(fields) != width:
            raise DataFormatError(
                f"{path}: row {row_no}: expected {width} columns, found {len(fields)}"
            )
        coords = []
        for col, field in enumerate(fields):
            if col == label_column:
                raw_labels.append(field)
                continue
            try:
                value = float(field)
            except ValueError:
                raise DataFormatError(
                    f"{path}: row {row_no}, column {col + 1}: could not parse "
                    f"{field!r} as a number"
                ) from None
            if not np.isfinite(value):
                raise DataFormatError(
                    f"{path}: row {row_no}, column {col + 1}: non-finite value {field!r}"
                )
            coords.append(value)
        points.append(coords)
    if len(points) < 2:
        raise DataFormatError(f"{path}: need at least 2 data rows, found {len(points)}")
    if not points[0]:
        raise DataFormatError(f"{path}: rows contain no coordinate columns")
    x = np.asarray(points, dtype=np.float64)
    if label_column is None:
        return x, None
    # distinct raw label tokens become ids 0..c-1 in order of first appearance
    seen: dict[str, int] = {}
    ids = [seen.setdefault(tok, len(seen)) for tok in raw_labels]
    return x, np.asarray(ids, dtype=np.int64)


def load_points(
    path: str,
    format: str = "csv",
    label_column: Optional[int] = None,
    header: bool = False,
) -> tuple[np.ndarray, Optional[np.ndarray]]:
    """Read a delimited text file of points.

    Parameters
    ----------
    path : file to read.
    format : "csv" (comma separated) or "whitespace".
    label_column : optional 0-based column holding class labels; distinct
        tokens are remapped to contiguous ids in order of first appearance.
    header : skip the first line.

    Returns (points, labels); labels is None when no label column was given.
    Row/column positions in error messages are 1-based file coordinates.
    """
    if format not in ("csv", "whitespace"):
        raise ValueError(f"unknown format {format!r}; expected 'csv' or 'whitespace'")
    with open(path, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    lines = text.splitlines()
    start = 1 if header else 0
    if format == "csv":
        reader = csv.reader(io.StringIO("\n".join(lines[start:])))
        rows = [(start + i + 1, row) for i, row in enumerate(reader)]
    else:
        rows = [(start + i + 1, line.split()) for i, line in enumerate(lines[start:])]
    return _parse_rows(rows, label_column, path)


def save_points(
    path: str,
    points: np.ndarray,
    labels: Optional[np.ndarray] = None,
    format: str = "csv",
) -> None:
    """Write points (and optionally a trailing label column) as delimited text."""
    if format not in ("csv", "whitespace"):
        raise ValueError(f"unknown format {format!r}; expected 'csv' or 'whitespace'")
    x = np.asarray(points, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"points must be 2-d, got shape {x.shape}")
    if labels is not None and len(labels) != x.shape[0]:
        raise ValueError(
            f"labels length {len(labels)} does not match {x.shape[0]} points"
        )
    sep = "," if format == "csv" else " "
    with open(path, "w", encoding="utf-8") as fh:
        for i, row in enumerate(x):
            fields = [repr(float(v)) for v in row]
            if labels is not None:
                fields.append(str(int(labels[i])))
            fh.write(sep.join(fields) + "\n")


def save_labels(path: str, labels: np.ndarray) -> None:
    """Write one integer label per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for v in np.asarray(labels).ravel():
            fh.write(f"{int(v)}\n")


def load_labels(path: str) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return np.asarray([int(line) for line in fh if line.strip()], dtype=np.int64)


def generate_random(
    n: int,
    d: int,
    k: int,
    seed: int,
    spread: float = 1.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Draw n points around k Gaussian blobs in d dimensions.

    Deterministic given the arguments: a PCG64 generator seeded with `seed`
    first draws the k blob centers uniformly from [0, 10]^d, then point i is
    assigned to blob i % k and offset by isotropic Gaussian noise with
    standard deviation `spread`.

    Returns (points, labels) with labels in 0..k-1.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if n < max(2, k):
        raise ValueError(f"n must be >= max(2, k), got n={n}, k={k}")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if not (spread > 0):
        raise ValueError(f"spread must be > 0, got {spread}")
    rng = np.random.Generator(np.random.PCG64(seed))
    centers = rng.uniform(0.0, 10.0, size=(k, d))
    labels = np.arange(n, dtype=np.int64) % k
    points = centers[labels] + rng.normal(0.0, spread, size=(n, d))
    return points, labels


def standardize(points: np.ndarray) -> np.ndarray:
    """Z-score each coordinate; constant columns are left centered at zero."""
    x = np.asarray(points, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"points must be 2-d, got shape {x.shape}")
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    std = np.where(std == 0.0, 1.0, std)
    return (x - mean) / std


def class_count(labels: np.ndarray) -> int:
    """Number of distinct classes; labels must already be contiguous 0..c-1."""
    lab = np.asarray(labels, dtype=np.int64)
    if lab.size == 0:
        return 0
    c = int(lab.max()) + 1
    present = np.unique(lab)
    if lab.min() < 0 or present.size != c:
        raise ValueError("labels must cover the contiguous range 0..class_count-1")
    return c
