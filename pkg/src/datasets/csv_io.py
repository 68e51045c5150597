"""
Feature-matrix CSV files.

Schema: header `f0,...,f{d-1},label`, one sample per row, decimal features and
a trailing nonnegative integer label. Values are written as shortest
round-trip decimals, so save -> load reproduces every float bit for bit.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np
import pandas as pd

from ..base import Dataset
from ..base.errors import EmptyFile, IoFailure, LabelOutOfRange, MalformedHeader, MalformedRow, NonNumericCell
from ..log.logger import get_logger

log = get_logger(__name__)

LABEL_COLUMN = "label"


def expected_header(n_features: int) -> list[str]:
    return [f"f{j}" for j in range(n_features)] + [LABEL_COLUMN]


def _parse_float(cell: object, row: int, col: int) -> float:
    if not isinstance(cell, str):
        raise NonNumericCell(row, col, cell)
    try:
        value = float(cell)
    except ValueError:
        raise NonNumericCell(row, col, cell) from None
    if not np.isfinite(value):
        raise NonNumericCell(row, col, cell)
    return value


def _parse_label(cell: object, row: int, col: int) -> int:
    value = _parse_float(cell, row, col)
    if value < 0 or not value.is_integer():
        raise LabelOutOfRange(cell, row=row)
    return int(value)


def _read_frame(path: Path) -> pd.DataFrame:
    try:
        if path.stat().st_size == 0:
            raise EmptyFile(f"{path} is empty")
        return pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError:
        raise EmptyFile(f"{path} is empty") from None
    except pd.errors.ParserError as e:
        match = re.search(r"line (\d+)", str(e))
        raise MalformedRow(int(match.group(1)) if match else 0, str(e).strip()) from None
    except UnicodeDecodeError as e:
        raise MalformedRow(0, f"not UTF-8: {e}") from None
    except OSError as e:
        raise IoFailure(f"cannot read {path}: {e}") from e


def load_dataset_csv(path: str | Path) -> Dataset:
    """
    Read a dataset CSV. d comes from the header and n_classes = max label + 1.

    Row and column numbers in errors are 0-based data-row / column indices.
    """
    path = Path(path)
    frame = _read_frame(path)
    columns = [str(c) for c in frame.columns]
    n_features = len(columns) - 1
    if n_features < 1 or columns != expected_header(n_features):
        raise MalformedHeader(f"{path}: expected header f0,...,f{{d-1}},label, got {','.join(columns)}")
    if frame.empty:
        raise EmptyFile(f"{path} has a header but no samples")

    cells = frame.to_numpy(dtype=object)
    features = np.empty((cells.shape[0], n_features), dtype=np.float64)
    labels = np.empty(cells.shape[0], dtype=np.int64)
    for i, row in enumerate(cells):
        for j in range(n_features):
            features[i, j] = _parse_float(row[j], i, j)
        labels[i] = _parse_label(row[n_features], i, n_features)

    dataset = Dataset(features, labels, int(labels.max()) + 1)
    log.info(f"📂 Loaded {dataset!r} from {path}")
    return dataset


def save_dataset_csv(dataset: Dataset, path: str | Path) -> Path:
    """Write `dataset` in the schema load_dataset_csv reads"""
    path = Path(path)
    columns = {f"f{j}": [repr(float(v)) for v in dataset.features[:, j]] for j in range(dataset.n_features)}
    columns[LABEL_COLUMN] = [str(int(v)) for v in dataset.labels]
    frame = pd.DataFrame(columns, columns=expected_header(dataset.n_features))
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
    except OSError as e:
        raise IoFailure(f"cannot write {path}: {e}") from e
    log.info(f"💾 Saved {dataset!r} to {path}")
    return path
