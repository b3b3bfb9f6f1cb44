"""
This module contains the tests of the JSON problem documents.
"""

import json
from pathlib import Path

import numpy as np
import pytest
from numpy.testing import assert_allclose

from limes_toolkit.constants import Application
from limes_toolkit.errors import ConfigError, InputError
from limes_toolkit.model.document import ProblemDocument, build_problem
from limes_toolkit.model.problem import objective_eval

PMC_DOCUMENT = {
    "application": "pmc",
    "matrices": {"A": "1\n", "y": "3\n"},
    "scalars": {"mu": 1.0, "gamma": 1.0},
}


def test_build_problem__pmc() -> None:
    problem = build_problem(ProblemDocument.from_dict(PMC_DOCUMENT))
    assert problem.application == Application.PMC
    assert np.isclose(objective_eval(problem, [3.0]), 0.5)


def test_from_dict__accepts_json_lists() -> None:
    document = ProblemDocument.from_dict(
        {
            "application": "orr",
            "matrices": {"A": [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]], "y": [1.0, 2.0, 3.0]},
            "scalars": {"mu": 0.1, "gamma": 1.0},
        }
    )
    assert document.matrices["y"].shape == (3, 1)
    assert_allclose(document.vector("y"), [1.0, 2.0, 3.0])
    assert build_problem(document).x_dim == 2


def test_build_problem__generic() -> None:
    document = ProblemDocument.from_dict(
        {
            "application": "generic",
            "matrices": {
                "M1": [[1.0, 0.0], [0.0, 1.0]],
                "c1": [0.0, -1.0],
                "M2": [[1.0, 0.0], [0.0, 1.0]],
                "c2": [0.0, 0.0],
                "L": [[1.0, 0.0], [0.0, 1.0]],
            },
            "scalars": {"mu": 0.5, "gamma": 1.0},
            "seed": "box_support",
        }
    )
    problem = build_problem(document)
    assert problem.application == Application.GENERIC
    assert problem.seed.dim == 2


@pytest.mark.parametrize(
    "data",
    [
        {**PMC_DOCUMENT, "unknown": 1},
        {**PMC_DOCUMENT, "application": "lasso"},
        {**PMC_DOCUMENT, "scalars": {"mu": 1.0}},
        {**PMC_DOCUMENT, "scalars": {"mu": "one", "gamma": 1.0}},
        {**PMC_DOCUMENT, "seed": "l2"},
        {key: value for key, value in PMC_DOCUMENT.items() if key != "application"},
    ],
)
def test_from_dict__rejects_invalid(data: dict) -> None:
    with pytest.raises(ConfigError):
        ProblemDocument.from_dict(data)


def test_build_problem__rejects_inconsistent_matrices() -> None:
    document = ProblemDocument.from_dict(
        {**PMC_DOCUMENT, "matrices": {"A": "1,2\n3,4\n", "y": "1\n2\n3\n"}}
    )
    with pytest.raises(InputError):
        build_problem(document)


def test_to_json_then_from_json(tmp_path: Path) -> None:
    document = ProblemDocument.from_dict(
        {
            "application": "spcp",
            "matrices": {"Y": [[1.0, 2.0], [3.0, 4.5]]},
            "scalars": {"mu_l": 1.0, "mu_s": 2.0, "gamma": 1.0},
        }
    )
    path = tmp_path / "problem.json"
    document.to_json(path)
    assert json.loads(path.read_text(encoding="utf-8"))["application"] == "spcp"
    reloaded = ProblemDocument.from_json(path)
    assert_allclose(reloaded.matrices["Y"], document.matrices["Y"])
    assert reloaded.scalars == document.scalars
