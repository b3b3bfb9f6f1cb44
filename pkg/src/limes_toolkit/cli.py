"""
This module implements the `limes` command line: solving a problem document, checking its
convexity, and running the experiments.

Every run writes a `manifest.json` next to its outputs. Failures are reported through the
exit code only (see `ExitCode`).
"""

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np
import pandas as pd

from limes_toolkit import __version__
from limes_toolkit.bench.constants import MANIFEST_FILE_NAME, Experiment
from limes_toolkit.bench.runner import run_experiment
from limes_toolkit.bench.spec import ExperimentSpec
from limes_toolkit.constants import CSV_FLOAT_FORMAT, Application, ExitCode, SolverName
from limes_toolkit.errors import ConfigError, ConvexityError, InputError, NumericalError
from limes_toolkit.linop.csv_io import write_matrix_csv
from limes_toolkit.model.convexity import closed_form_report, spade_check
from limes_toolkit.model.document import ProblemDocument, build_problem
from limes_toolkit.model.problem import objective_eval
from limes_toolkit.solvers.config import SolverConfig, SolveResult
from limes_toolkit.solvers.ista import ista, lasso_objective
from limes_toolkit.solvers.primal_dual import primal_dual_debiasing
from limes_toolkit.solvers.prox_gradient import proximal_debiasing_gradient

LOG = logging.getLogger(__name__)

DEFAULT_OUT_DIR = Path("limes_output")

X_FILE_NAME = "x.csv"
TRACES_FILE_NAME = "traces.csv"
SUMMARY_FILE_NAME = "summary.json"

EXPERIMENT_COMMANDS = {
    "exp-a": Experiment.EXP_A,
    "exp-b": Experiment.EXP_B,
    "spcp": Experiment.SPCP_DEMO,
    "classify": Experiment.CLASSIFY_DEMO,
}

LASSO_APPLICATIONS = (Application.PMC, Application.MC)
"""Documents whose (A, y, mu) also define a lasso, the problem solved by ISTA."""


def parse_override(text: str) -> tuple[str, Any]:
    """
    Parses a `key=value` override. The value is read as JSON, or kept as a string if it is
    not valid JSON.

    :raises ConfigError: If there is no '=' or the key is empty.
    """
    key, separator, raw = text.partition("=")
    if not separator or not key:
        raise ConfigError(f"Overrides must read key=value, got {text!r}.")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def apply_overrides(data: dict[str, Any], overrides: Sequence[str]) -> dict[str, Any]:
    """
    Applies `key=value` overrides to a JSON dictionary. Dotted keys address nested
    dictionaries, e.g. `scalars.mu=2`.
    """
    for text in overrides:
        key, value = parse_override(text)
        *parents, leaf = key.split(".")
        target = data
        for parent in parents:
            child = target.setdefault(parent, {})
            if not isinstance(child, dict):
                raise ConfigError(f"Cannot override {key!r}: {parent!r} is not a section.")
            target = child
        target[leaf] = value
    return data


def _read_json(path: Path | None) -> dict[str, Any]:
    if path is None:
        return {}
    with open(path, encoding="utf-8") as file:
        data = json.load(file)
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must contain a JSON object.")
    return data


def write_manifest(out_dir: Path, command: str, parameters: dict[str, Any]) -> Path:
    """Writes the resolved parameters of a run, with the library version, to `out_dir`."""
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / MANIFEST_FILE_NAME
    manifest = {"command": command, "version": __version__, **parameters}
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _solve(
    document: ProblemDocument, solver: SolverName, config: SolverConfig
) -> tuple[SolveResult, float]:
    if solver == SolverName.ISTA:
        if document.application not in LASSO_APPLICATIONS:
            raise ConfigError(
                "ISTA solves the lasso of a pmc or mc document, got "
                f"{document.application.value}."
            )
        a, y, mu = document.matrices["A"], document.vector("y"), document.scalars["mu"]
        result = ista(a, y, mu, config)
        return result, lasso_objective(a, y, mu, result.x)
    problem = build_problem(document)
    if solver == SolverName.PROX_GRAD:
        result = proximal_debiasing_gradient(problem, config)
    else:
        result = primal_dual_debiasing(problem, config)
    return result, objective_eval(problem, result.x)


def cmd_solve(args: argparse.Namespace) -> ExitCode:
    """
    Solves a problem document and writes x.csv, traces.csv, summary.json and manifest.json.
    Overrides address either the problem (`problem.scalars.mu=2`) or the solver
    (`solver.rel_tol=1e-8`).
    """
    root = apply_overrides(
        {"problem": _read_json(args.problem), "solver": _read_json(args.config)}, args.set
    )
    document = ProblemDocument.from_dict(root["problem"])
    solver_data = dict(root["solver"])
    if args.allow_nonconvex:
        solver_data["allow_nonconvex"] = True
    config = SolverConfig.from_dict(solver_data)
    solver = SolverName(args.solver)

    result, objective = _solve(document, solver, config)

    out_dir: Path = args.out
    out_dir.mkdir(parents=True, exist_ok=True)
    write_matrix_csv(out_dir / X_FILE_NAME, result.x)
    traces = pd.DataFrame(
        {
            "iteration": np.arange(1, len(result.objective_trace) + 1),
            "objective": result.objective_trace,
            "residual": result.residual_trace,
        }
    )
    traces.to_csv(
        out_dir / TRACES_FILE_NAME, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n"
    )
    summary = {
        "objective": objective,
        "iterations": result.iterations,
        "converged": result.converged,
        "convexity_margin": result.convexity_margin,
        "global_guarantee": result.global_guarantee,
    }
    (out_dir / SUMMARY_FILE_NAME).write_text(
        json.dumps(summary, indent=2) + "\n", encoding="utf-8"
    )
    write_manifest(
        out_dir,
        "solve",
        {
            "problem": document.to_dict(),
            "solver": solver.value,
            "solver_config": config.to_dict(),
            "steps": dict(result.steps),
        },
    )
    LOG.info(
        "Objective %.10g after %d iterations (converged=%s).",
        objective,
        result.iterations,
        result.converged,
    )
    return ExitCode.OK


def cmd_check(args: argparse.Namespace) -> ExitCode:
    """
    Prints the closed-form bound of the application (if any) and the eigenvalue margin of the
    Gram-difference test, and writes both reports to the manifest. Exit 0 if the smooth part
    is convex, 3 otherwise.
    """
    data = apply_overrides(_read_json(args.problem), args.set)
    document = ProblemDocument.from_dict(data)
    problem = build_problem(document)
    closed_form = closed_form_report(problem)
    report = spade_check(problem)
    write_manifest(
        args.out,
        "check",
        {
            "problem": document.to_dict(),
            "tolerance": report.tolerance,
            "eigenvalue_report": asdict(report),
            "closed_form_report": None if closed_form is None else asdict(closed_form),
        },
    )

    if closed_form is not None:
        print(f"closed-form: {closed_form.details}, margin {closed_form.margin:.6e}")
    else:
        print("closed-form: none for this application")
    print(f"eigenvalue margin: {report.margin:.6e}")
    satisfied = report.satisfied and (closed_form is None or closed_form.satisfied)
    print(f"convex: {'yes' if satisfied else 'no'}")
    if report.details:
        LOG.info(report.details)
    return ExitCode.OK if satisfied else ExitCode.NONCONVEX


def experiment_spec(experiment: Experiment, args: argparse.Namespace) -> ExperimentSpec:
    """The spec of an experiment command: preset, then config file, then overrides."""
    data = apply_overrides(_read_json(args.config), args.set)
    if data.setdefault("experiment", experiment.value) != experiment.value:
        raise ConfigError(
            f"The config describes {data['experiment']!r} but the command runs "
            f"{experiment.value!r}."
        )
    if args.seed is not None:
        data["master_seed"] = args.seed
    if args.timing:
        data["record_wallclock"] = True
    return ExperimentSpec.from_dict(data)


def cmd_experiment(args: argparse.Namespace) -> ExitCode:
    """Runs an experiment, writes its CSV files and manifest and prints the aggregate."""
    spec = experiment_spec(EXPERIMENT_COMMANDS[args.command], args)
    outcome = run_experiment(spec, args.out)
    write_manifest(args.out, args.command, {"spec": spec.to_dict()})
    print(outcome.aggregate.to_string(index=False))
    return ExitCode.OK


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--out",
        type=Path,
        default=DEFAULT_OUT_DIR,
        help=f"Output directory (default: {DEFAULT_OUT_DIR}).",
    )
    parser.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override a configuration value; the value is parsed as JSON. Repeatable.",
    )


def build_parser() -> argparse.ArgumentParser:
    """Builds the argument parser of the `limes` command."""
    parser = argparse.ArgumentParser(
        prog="limes",
        description="Weakly convex regularization with linearly-involved Moreau enhancement.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Log debug messages.")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Log warnings only.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    solve = subparsers.add_parser("solve", help="Solve a JSON problem document.")
    solve.add_argument("problem", type=Path, help="Path to the problem document.")
    solve.add_argument(
        "--solver",
        choices=[name.value for name in SolverName],
        default=SolverName.PRIMAL_DUAL.value,
    )
    solve.add_argument("--config", type=Path, help="Path to a JSON solver configuration.")
    solve.add_argument(
        "--allow-nonconvex",
        action="store_true",
        help="Run even if the smooth part is not convex (no global guarantee).",
    )
    _add_common_arguments(solve)
    solve.set_defaults(handler=cmd_solve)

    check = subparsers.add_parser("check", help="Check the convexity condition of a problem.")
    check.add_argument("problem", type=Path, help="Path to the problem document.")
    _add_common_arguments(check)
    check.set_defaults(handler=cmd_check)

    for command, experiment in EXPERIMENT_COMMANDS.items():
        sub = subparsers.add_parser(command, help=f"Run the {experiment.value} experiment.")
        sub.add_argument("--config", type=Path, help="Path to a JSON experiment spec.")
        sub.add_argument("--seed", type=int, help="Master seed of the trials.")
        sub.add_argument(
            "--timing", action="store_true", help="Record wall-clock times of the methods."
        )
        _add_common_arguments(sub)
        sub.set_defaults(handler=cmd_experiment)
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Sequence[str] | None = None) -> int:
    """
    Entry point of the `limes` command.

    :param argv: The arguments, without the program name; defaults to `sys.argv[1:]`.
    :return: The exit code.
    """
    args = build_parser().parse_args(argv)
    _configure_logging(args)
    handler: Callable[[argparse.Namespace], ExitCode] = args.handler
    try:
        return int(handler(args))
    except ConvexityError as error:
        LOG.error("%s", error)
        return int(ExitCode.NONCONVEX)
    except NumericalError as error:
        LOG.error("Numerical failure: %s", error)
        return int(ExitCode.NUMERICAL_FAILURE)
    except (ConfigError, InputError, FileNotFoundError, json.JSONDecodeError) as error:
        LOG.error("Invalid input: %s", error)
        return int(ExitCode.INVALID_CONFIG)


if __name__ == "__main__":
    sys.exit(main())
