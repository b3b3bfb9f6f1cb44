"""
This module implements the JSON problem document read by the command line: an application
name, CSV-embedded matrices and scalar parameters.

Example document:

    {
        "application": "pmc",
        "matrices": {"A": "1\n", "y": "3\n"},
        "scalars": {"mu": 1.0, "gamma": 1.0}
    }

Matrices may also be given as nested JSON lists.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping

import numpy as np

from limes_toolkit.constants import Application
from limes_toolkit.errors import ConfigError, InputError
from limes_toolkit.linop.csv_io import matrix_from_csv_text, matrix_to_csv_text
from limes_toolkit.linop.operators import AffineOperator, BlockScalarDiagonal, as_vector
from limes_toolkit.model import applications
from limes_toolkit.model.problem import LimesProblem
from limes_toolkit.proximal.seeds import BoxSupport, L1Norm, ProximableSeed
from limes_toolkit.types import FloatArray

DOCUMENT_KEYS = ("application", "matrices", "scalars", "seed", "extras")

GENERIC_SEEDS: dict[str, Callable[[int], ProximableSeed]] = {
    "l1": L1Norm,
    "box_support": BoxSupport,
}
"""Seeds available to user-assembled problems, by name."""

REQUIRED_FIELDS: dict[Application, tuple[tuple[str, ...], tuple[str, ...]]] = {
    Application.PMC: (("A", "y"), ("mu", "gamma")),
    Application.MC: (("A", "y"), ("mu", "gamma")),
    Application.SORR: (("A", "y"), ("mu", "gamma", "sigma_x", "sigma_eps")),
    Application.ORR: (("A", "y"), ("mu", "gamma")),
    Application.SPCP: (("Y",), ("mu_l", "mu_s", "gamma")),
    Application.CLASSIFY: (("samples", "labels"), ("mu", "gamma")),
    Application.MC_TV: (("y",), ("mu", "gamma")),
    Application.MEN: (("Y",), ("mu", "gamma")),
    Application.GENERIC: (("M1", "c1", "M2", "c2", "L"), ("mu", "gamma")),
}
"""The (matrices, scalars) each application needs."""


def _parse_matrix(name: str, value: Any) -> FloatArray:
    if isinstance(value, str):
        return matrix_from_csv_text(value)
    try:
        matrix = np.asarray(value, dtype=np.float64)
    except (TypeError, ValueError) as error:
        raise ConfigError(f"Matrix {name!r} is neither CSV text nor a numeric array.") from error
    matrix = np.atleast_1d(matrix)
    return matrix[:, np.newaxis] if matrix.ndim == 1 else matrix


@dataclass(frozen=True)
class ProblemDocument:
    """
    A serializable description of a LiMES problem.
    """

    application: Application
    """The problem family."""

    matrices: Mapping[str, FloatArray]
    """Named matrices; vectors are stored as single-column matrices."""

    scalars: Mapping[str, float]
    """Named scalar parameters (mu, gamma, sigma_x, sigma_eps, mu_l, mu_s)."""

    seed: str = "l1"
    """The seed of a generic problem, one of `GENERIC_SEEDS`."""

    extras: Mapping[str, Any] = field(default_factory=dict)
    """Free-form annotations, copied to the manifest of a run."""

    def __post_init__(self) -> None:
        matrices, scalars = REQUIRED_FIELDS[self.application]
        missing = [name for name in matrices if name not in self.matrices]
        missing += [name for name in scalars if name not in self.scalars]
        if missing:
            raise ConfigError(
                f"A {self.application.value} document needs the fields {sorted(missing)}."
            )
        if self.seed not in GENERIC_SEEDS:
            raise ConfigError(
                f"Unknown seed {self.seed!r}, expected one of {list(GENERIC_SEEDS)}."
            )

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ProblemDocument":
        """
        Builds a document from its JSON dictionary.

        :raises ConfigError: On unknown keys, unknown applications or missing fields.
        """
        unknown = set(data) - set(DOCUMENT_KEYS)
        if unknown:
            raise ConfigError(f"Unknown problem document keys: {sorted(unknown)}.")
        try:
            application = Application(data["application"])
        except (KeyError, ValueError) as error:
            raise ConfigError(
                f"Invalid application {data.get('application')!r}, expected one of "
                f"{[app.value for app in Application]}."
            ) from error
        matrices = {
            name: _parse_matrix(name, value) for name, value in data.get("matrices", {}).items()
        }
        try:
            scalars = {name: float(value) for name, value in data.get("scalars", {}).items()}
        except (TypeError, ValueError) as error:
            raise ConfigError(f"Scalars must be numbers: {error}") from error
        return cls(
            application=application,
            matrices=matrices,
            scalars=scalars,
            seed=data.get("seed", "l1"),
            extras=data.get("extras", {}),
        )

    @classmethod
    def from_json(cls, path: Path) -> "ProblemDocument":
        """Reads a document from a UTF-8 JSON file."""
        with open(path, encoding="utf-8") as file:
            return cls.from_dict(json.load(file))

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "application": self.application.value,
            "matrices": {name: matrix_to_csv_text(value) for name, value in self.matrices.items()},
            "scalars": dict(self.scalars),
        }
        if self.application == Application.GENERIC:
            data["seed"] = self.seed
        if self.extras:
            data["extras"] = dict(self.extras)
        return data

    def to_json(self, path: Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2), encoding="utf-8")

    def vector(self, name: str) -> FloatArray:
        """The matrix `name` flattened to a vector."""
        return as_vector(self.matrices[name], name)


def build_problem(document: ProblemDocument) -> LimesProblem:
    """
    Builds the problem described by `document`.

    :raises InputError: If the matrices are inconsistent.
    """
    mats, scalars = document.matrices, document.scalars
    match document.application:
        case Application.PMC:
            return applications.make_pmc(
                mats["A"], document.vector("y"), scalars["mu"], scalars["gamma"]
            )
        case Application.MC:
            return applications.make_mc(
                mats["A"], document.vector("y"), scalars["mu"], scalars["gamma"]
            )
        case Application.SORR:
            return applications.make_sorr(
                mats["A"],
                document.vector("y"),
                scalars["sigma_x"],
                scalars["sigma_eps"],
                scalars["mu"],
                scalars["gamma"],
            )
        case Application.ORR:
            return applications.make_orr(
                mats["A"], document.vector("y"), scalars["mu"], scalars["gamma"]
            )
        case Application.SPCP:
            return applications.make_spcp(
                mats["Y"], scalars["mu_l"], scalars["mu_s"], scalars["gamma"]
            )
        case Application.CLASSIFY:
            return applications.make_classify(
                mats["samples"], document.vector("labels"), scalars["mu"], scalars["gamma"]
            )
        case Application.MC_TV:
            return applications.make_mc_tv(document.vector("y"), scalars["mu"], scalars["gamma"])
        case Application.MEN:
            return applications.make_men(mats["Y"], scalars["mu"], scalars["gamma"])
    if not scalars["gamma"] > 0:
        raise InputError(f"gamma must be strictly positive, got {scalars['gamma']}.")
    z_dim = mats["L"].shape[0]
    return LimesProblem(
        a1=AffineOperator(matrix=mats["M1"], offset=document.vector("c1")),
        a2=AffineOperator(matrix=mats["M2"], offset=document.vector("c2")),
        l_matrix=mats["L"],
        d=BlockScalarDiagonal.scalar(z_dim, scalars["gamma"] ** -0.5),
        seed=GENERIC_SEEDS[document.seed](z_dim),
        mu=scalars["mu"],
        application=Application.GENERIC,
        parameters={"gamma": scalars["gamma"]},
    )
