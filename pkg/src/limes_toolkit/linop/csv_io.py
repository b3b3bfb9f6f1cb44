"""CSV reading and writing of dense matrices and vectors."""

import io
from pathlib import Path

import numpy as np
import numpy.typing as npt
import pandas as pd

from limes_toolkit.constants import CSV_FLOAT_FORMAT
from limes_toolkit.errors import InputError
from limes_toolkit.linop.operators import as_matrix
from limes_toolkit.types import FloatArray


def _parse(buffer: io.StringIO | Path, source: str) -> FloatArray:
    try:
        frame = pd.read_csv(buffer, header=None, dtype=np.float64)
    except (pd.errors.ParserError, ValueError) as error:
        raise InputError(f"Could not parse {source} as a numeric CSV: {error}") from error
    if frame.isna().to_numpy().any():
        raise InputError(f"{source} has ragged rows or empty fields.")
    return as_matrix(frame.to_numpy(), source)


def read_matrix_csv(path: Path) -> FloatArray:
    """
    Reads a matrix stored one row per line, comma separated, without header.

    :raises InputError: If rows are ragged or entries are not finite numbers.
    """
    return _parse(Path(path), str(path))


def matrix_from_csv_text(text: str) -> FloatArray:
    """Parses a matrix from CSV text, as embedded in JSON problem documents."""
    return _parse(io.StringIO(text), "embedded CSV")


def matrix_to_csv_text(matrix: npt.ArrayLike) -> str:
    """Formats a matrix (or a vector, as a single column) as CSV text without header."""
    values = np.asarray(matrix, dtype=np.float64)
    if values.ndim == 1:
        values = values[:, np.newaxis]
    return pd.DataFrame(values).to_csv(header=False, index=False, float_format=CSV_FLOAT_FORMAT)


def write_matrix_csv(path: Path, matrix: npt.ArrayLike) -> None:
    """Writes a matrix one row per line, or a vector one entry per line."""
    Path(path).write_text(matrix_to_csv_text(matrix), encoding="utf-8")
