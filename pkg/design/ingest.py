"""CSV ingest and export for experiment datasets."""
import logging
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from design.models import ExperimentData
from utils.errors import DegenerateArm, NonBinaryTreatment, ParseError


logger = logging.getLogger(__name__)


def _numeric_column(frame: pd.DataFrame, column: str) -> np.ndarray:
    """Parse one column as reals, locating the first bad cell."""
    raw = frame[column]
    values = pd.to_numeric(raw, errors="coerce")
    bad = values.isna()
    if bad.any():
        row = int(np.argmax(bad.to_numpy()))
        cell = raw.iloc[row]
        reason = "missing value" if pd.isna(cell) or str(cell).strip() == "" else f"cannot parse {cell!r}"
        # +2: one for the header line, one for 1-based numbering
        raise ParseError(reason, row=row + 2, column=column)
    return values.to_numpy(dtype=float)


def ingest_csv(path: str, y_col: str = "y", t_col: str = "t",
               z_cols: Optional[Sequence[str]] = None) -> ExperimentData:
    """Read, validate and center a dataset from a headed UTF-8 CSV file.

    When z_cols is None every column other than y_col and t_col is a covariate.
    """
    path = Path(path)
    if not path.exists():
        logger.error(f"File not found: {path}")
        raise FileNotFoundError(f"File not found: {path}")

    frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    columns: List[str] = list(frame.columns)
    if z_cols is None:
        z_cols = [c for c in columns if c not in (y_col, t_col)]
    for column in [y_col, t_col, *z_cols]:
        if column not in columns:
            raise ParseError(f"column not found; available: {columns}", column=column)
    if not z_cols:
        raise ParseError("at least one covariate column is required")

    y = _numeric_column(frame, y_col)
    t = _numeric_column(frame, t_col)
    not_binary = ~np.isin(t, (0.0, 1.0))
    if not_binary.any():
        row = int(np.argmax(not_binary))
        raise NonBinaryTreatment(f"treatment value {t[row]!r} at row {row + 2} is not 0/1")
    n_a = int(t.sum())
    if n_a < 2 or len(t) - n_a < 2:
        raise DegenerateArm(f"both arms need at least 2 units; got n_A={n_a}, n_B={len(t) - n_a}")

    z_raw = np.column_stack([_numeric_column(frame, c) for c in z_cols])
    data = ExperimentData.from_raw(y=y, t=t, z_raw=z_raw)
    logger.info(f"Parsed CSV file: {path} (n={data.n}, n_A={data.n_a}, K={data.k})")
    return data


def write_csv(data: ExperimentData, path: str, y_col: str = "y", t_col: str = "t",
              z_cols: Optional[Sequence[str]] = None) -> Path:
    """Write (y, t, centered z) with a header row."""
    z_cols = list(z_cols) if z_cols is not None else [f"z{j + 1}" for j in range(data.k)]
    frame = pd.DataFrame({y_col: data.y, t_col: data.t.astype(int)})
    for j, column in enumerate(z_cols):
        frame[column] = data.z[:, j]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g", encoding="utf-8")
    logger.info(f"Wrote dataset to {path}")
    return path
