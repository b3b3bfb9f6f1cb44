"""
This module contains the tests of the `limes` command line.
"""

import json
from pathlib import Path

import numpy as np
import pytest

from limes_toolkit.bench.constants import AGGREGATE_FILE_NAME, MANIFEST_FILE_NAME, TRIALS_FILE_NAME
from limes_toolkit.cli import (
    SUMMARY_FILE_NAME,
    TRACES_FILE_NAME,
    X_FILE_NAME,
    apply_overrides,
    main,
    parse_override,
)
from limes_toolkit.constants import ExitCode
from limes_toolkit.errors import ConfigError
from limes_toolkit.linop.csv_io import read_matrix_csv
from limes_toolkit.model.convexity import convexity_bound_sorr

PMC_DOCUMENT = {
    "application": "pmc",
    "matrices": {"A": "1\n", "y": "3\n"},
    "scalars": {"mu": 1.0, "gamma": 1.0},
}


def _write(path: Path, data: dict) -> Path:
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def _read_json(path: Path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))


@pytest.fixture
def pmc_path(tmp_path: Path) -> Path:
    return _write(tmp_path / "pmc.json", PMC_DOCUMENT)


@pytest.mark.parametrize("solver", ["primal-dual", "prox-grad"])
def test_solve__1d_pmc(tmp_path: Path, pmc_path: Path, solver: str) -> None:
    out = tmp_path / "out"
    assert main(["solve", str(pmc_path), "--solver", solver, "--out", str(out)]) == ExitCode.OK
    assert np.allclose(read_matrix_csv(out / X_FILE_NAME).ravel(), [3.0], atol=1e-6)
    summary = _read_json(out / SUMMARY_FILE_NAME)
    assert np.isclose(summary["objective"], 0.5, atol=1e-9)
    assert summary["converged"] and summary["global_guarantee"]
    assert (out / TRACES_FILE_NAME).read_text(encoding="utf-8").startswith(
        "iteration,objective,residual\n"
    )
    manifest = _read_json(out / MANIFEST_FILE_NAME)
    assert manifest["command"] == "solve"
    assert manifest["solver"] == solver
    assert manifest["problem"]["application"] == "pmc"


def test_solve__ista(tmp_path: Path, pmc_path: Path) -> None:
    out = tmp_path / "out"
    assert main(["solve", str(pmc_path), "--solver", "ista", "--out", str(out)]) == ExitCode.OK
    assert np.allclose(read_matrix_csv(out / X_FILE_NAME).ravel(), [2.0], atol=1e-8)


def test_solve__ista_needs_lasso_document(tmp_path: Path) -> None:
    orr = _write(
        tmp_path / "orr.json",
        {
            "application": "orr",
            "matrices": {"A": [[1.0]], "y": [5.0]},
            "scalars": {"mu": 0.5, "gamma": 2.0},
        },
    )
    code = main(["solve", str(orr), "--solver", "ista", "--out", str(tmp_path / "out")])
    assert code == ExitCode.INVALID_CONFIG


def test_solve__solver_config_and_overrides(tmp_path: Path, pmc_path: Path) -> None:
    config = _write(tmp_path / "solver.json", {"max_iter": 3, "rel_tol": 0.0})
    out = tmp_path / "out"
    code = main(
        [
            "solve",
            str(pmc_path),
            "--config",
            str(config),
            "--set",
            "solver.max_iter=5",
            "--set",
            "problem.scalars.mu=0.5",
            "--out",
            str(out),
        ]
    )
    assert code == ExitCode.OK
    summary = _read_json(out / SUMMARY_FILE_NAME)
    assert summary["iterations"] == 5
    assert not summary["converged"]
    assert _read_json(out / MANIFEST_FILE_NAME)["problem"]["scalars"]["mu"] == 0.5


def test_solve__missing_file(tmp_path: Path) -> None:
    assert main(["solve", str(tmp_path / "absent.json")]) == ExitCode.INVALID_CONFIG


def test_solve__invalid_document(tmp_path: Path) -> None:
    path = _write(tmp_path / "bad.json", {"application": "pmc", "matrices": {"A": "1\n"}})
    code = main(["solve", str(path), "--out", str(tmp_path / "out")])
    assert code == ExitCode.INVALID_CONFIG


def test_solve__nonconvex_is_refused(tmp_path: Path, pmc_path: Path) -> None:
    out = tmp_path / "out"
    code = main(["solve", str(pmc_path), "--set", "problem.scalars.mu=2", "--out", str(out)])
    assert code == ExitCode.NONCONVEX
    assert not (out / SUMMARY_FILE_NAME).exists()


def test_solve__nonconvex_override(tmp_path: Path, pmc_path: Path) -> None:
    out = tmp_path / "out"
    code = main(
        [
            "solve",
            str(pmc_path),
            "--solver",
            "prox-grad",
            "--allow-nonconvex",
            "--set",
            "problem.scalars.mu=2",
            "--set",
            "solver.max_iter=50",
            "--out",
            str(out),
        ]
    )
    assert code == ExitCode.OK
    summary = _read_json(out / SUMMARY_FILE_NAME)
    assert not summary["global_guarantee"]
    assert summary["convexity_margin"] < 0


def test_solve__bad_override(tmp_path: Path, pmc_path: Path) -> None:
    code = main(["solve", str(pmc_path), "--set", "nokey", "--out", str(tmp_path / "out")])
    assert code == ExitCode.INVALID_CONFIG


def _check(path: Path, out: Path, *extra: str) -> ExitCode:
    return main(["check", str(path), "--out", str(out), *extra])


def test_check__pmc_at_bound(
    tmp_path: Path, pmc_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    assert _check(pmc_path, tmp_path / "out") == ExitCode.OK
    output = capsys.readouterr().out
    assert "closed-form: bound" in output
    assert "convex: yes" in output


def test_check__pmc_above_bound(
    tmp_path: Path, pmc_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    code = _check(pmc_path, tmp_path / "out", "--set", "scalars.mu=1.01")
    assert code == ExitCode.NONCONVEX
    assert "convex: no" in capsys.readouterr().out


def test_check__writes_manifest(tmp_path: Path, pmc_path: Path) -> None:
    out = tmp_path / "out"
    assert _check(pmc_path, out, "--set", "scalars.mu=1.01") == ExitCode.NONCONVEX
    manifest = _read_json(out / MANIFEST_FILE_NAME)
    assert manifest["command"] == "check"
    assert manifest["problem"]["application"] == "pmc"
    assert manifest["problem"]["scalars"]["mu"] == 1.01
    eigenvalue = manifest["eigenvalue_report"]
    assert eigenvalue["method"] == "spade_check"
    assert not eigenvalue["satisfied"]
    assert np.isclose(eigenvalue["margin"], -0.01)
    assert manifest["tolerance"] == eigenvalue["tolerance"] > 0
    closed_form = manifest["closed_form_report"]
    assert closed_form["method"] == "closed_form_report:pmc"
    assert np.isclose(closed_form["margin"], -0.01)


def test_check__manifest_keeps_annotations(tmp_path: Path) -> None:
    path = _write(tmp_path / "pmc.json", {**PMC_DOCUMENT, "extras": {"source": "bench-7"}})
    out = tmp_path / "out"
    assert _check(path, out) == ExitCode.OK
    assert _read_json(out / MANIFEST_FILE_NAME)["problem"]["extras"] == {"source": "bench-7"}


def test_check__spcp_at_bound(tmp_path: Path) -> None:
    path = _write(
        tmp_path / "spcp.json",
        {
            "application": "spcp",
            "matrices": {"Y": [[1.0, 2.0], [3.0, 4.0]]},
            "scalars": {"mu_l": 1.0, "mu_s": 1.0, "gamma": 0.5},
        },
    )
    assert _check(path, tmp_path / "out") == ExitCode.OK


def test_check__sorr_above_bound(tmp_path: Path) -> None:
    a = [[1.0, 2.0], [0.5, -1.0], [2.0, 0.0]]
    bound = convexity_bound_sorr(a, 1.0, 0.5, 1.0)
    path = _write(
        tmp_path / "sorr.json",
        {
            "application": "sorr",
            "matrices": {"A": a, "y": [1.0, 0.0, -1.0]},
            "scalars": {"mu": 1.05 * bound, "gamma": 1.0, "sigma_x": 1.0, "sigma_eps": 0.5},
        },
    )
    out = tmp_path / "out"
    assert _check(path, out) == ExitCode.NONCONVEX
    assert _check(path, out, "--set", f"scalars.mu={0.95 * bound!r}") == ExitCode.OK


def test_check__generic_has_no_closed_form(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    path = _write(
        tmp_path / "generic.json",
        {
            "application": "generic",
            "matrices": {
                "M1": [[1.0, 0.0], [0.0, 1.0]],
                "c1": [0.0, 0.0],
                "M2": [[1.0, 1.0]],
                "c2": [0.0],
                "L": [[1.0]],
            },
            "scalars": {"mu": 0.1, "gamma": 1.0},
        },
    )
    out = tmp_path / "out"
    assert _check(path, out) == ExitCode.OK
    assert "closed-form: none" in capsys.readouterr().out
    assert _read_json(out / MANIFEST_FILE_NAME)["closed_form_report"] is None


def test_experiment__writes_outputs(tmp_path: Path) -> None:
    out = tmp_path / "exp"
    args = ["exp-a", "--seed", "5", "--out", str(out)]
    for override in ("m=6", "n=8", "s=2", 'methods=["ols","ridge"]', "mu_grid_size=3"):
        args += ["--set", override]
    assert main(args) == ExitCode.OK
    assert (out / TRIALS_FILE_NAME).exists() and (out / AGGREGATE_FILE_NAME).exists()
    manifest = _read_json(out / MANIFEST_FILE_NAME)
    assert manifest["command"] == "exp-a"
    assert manifest["spec"]["experiment"] == "exp_a"
    assert manifest["spec"]["master_seed"] == 5
    assert manifest["spec"]["methods"] == ["ols", "ridge"]


def test_experiment__config_for_other_experiment(tmp_path: Path) -> None:
    config = _write(tmp_path / "spec.json", {"experiment": "exp_b"})
    code = main(["spcp", "--config", str(config), "--out", str(tmp_path / "out")])
    assert code == ExitCode.INVALID_CONFIG


def test_experiment__invalid_spec(tmp_path: Path) -> None:
    code = main(["classify", "--set", "trials=0", "--out", str(tmp_path / "out")])
    assert code == ExitCode.INVALID_CONFIG


@pytest.mark.parametrize(
    "text,expected",
    [
        ("mu=2", ("mu", 2)),
        ("rel_tol=1e-8", ("rel_tol", 1e-8)),
        ("name=pmc", ("name", "pmc")),
        ("methods=[\"ols\"]", ("methods", ["ols"])),
        ("flag=true", ("flag", True)),
    ],
)
def test_parse_override(text: str, expected: tuple) -> None:
    assert parse_override(text) == expected


@pytest.mark.parametrize("text", ["mu", "=2"])
def test_parse_override__invalid(text: str) -> None:
    with pytest.raises(ConfigError):
        parse_override(text)


def test_apply_overrides__nested() -> None:
    data = apply_overrides({"scalars": {"mu": 1.0}}, ["scalars.mu=2", "solver.max_iter=10"])
    assert data == {"scalars": {"mu": 2}, "solver": {"max_iter": 10}}
    with pytest.raises(ConfigError):
        apply_overrides({"scalars": 1.0}, ["scalars.mu=2"])
