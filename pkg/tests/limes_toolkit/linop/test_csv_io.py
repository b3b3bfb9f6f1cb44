"""This module contains the tests of the CSV reading and writing of matrices."""

from pathlib import Path

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from limes_toolkit.errors import InputError
from limes_toolkit.linop.csv_io import (
    matrix_from_csv_text,
    matrix_to_csv_text,
    read_matrix_csv,
    write_matrix_csv,
)


def test_write_then_read__is_exact(tmp_path: Path, rng: np.random.Generator) -> None:
    matrix = rng.standard_normal((4, 3))
    path = tmp_path / "a.csv"
    write_matrix_csv(path, matrix)
    assert_array_equal(read_matrix_csv(path), matrix)


def test_vector__is_written_as_a_column() -> None:
    assert matrix_to_csv_text([1.0, 2.5]) == "1\n2.5\n"


def test_matrix_from_csv_text() -> None:
    assert_array_equal(matrix_from_csv_text("1,2\n3,4\n"), [[1.0, 2.0], [3.0, 4.0]])


@pytest.mark.parametrize("text", ["1,2\n3\n", "1,a\n", "1,nan\n"])
def test_matrix_from_csv_text__rejects_invalid(text: str) -> None:
    with pytest.raises(InputError):
        matrix_from_csv_text(text)
