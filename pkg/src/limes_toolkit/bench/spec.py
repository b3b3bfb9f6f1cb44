"""
This module defines the experiment specification and the per-trial result of the harness.
"""

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from limes_toolkit.bench.constants import EXPERIMENT_METHODS, Experiment, Method
from limes_toolkit.errors import ConfigError

DEFAULT_ALPHA_PMC_GRID = tuple(np.round(np.linspace(0.1, 1.0, 10), 10).tolist())

PRESETS: dict[Experiment, dict[str, Any]] = {
    Experiment.EXP_A: {"m": 64, "n": 128, "s": 21, "snr_db": 20.0},
    Experiment.EXP_B: {
        "m": 128,
        "n": 64,
        "s": 64,
        "snr_db": 10.0,
        "sor_db": -30.0,
        "outlier_density": 0.15,
    },
    Experiment.SPCP_DEMO: {"m": 20, "n": 20, "s": 2},
    Experiment.CLASSIFY_DEMO: {"m": 200, "n": 5, "s": 5},
}
"""The problem sizes of each experiment; any field can be overridden."""


@dataclass(frozen=True)
class ExperimentSpec:
    """
    Data class to represent the configuration of an experiment run.
    """

    experiment: Experiment
    """Which experiment to run."""

    m: int = 64
    """The number of observations (the number of columns in the SPCP demo)."""

    n: int = 128
    """The number of unknowns (the number of rows in the SPCP demo)."""

    s: int = 21
    """The number of nonzeros of the ground truth (the rank in the SPCP demo)."""

    snr_db: float = 20.0
    """Target signal-to-noise ratio ||A x||^2 / ||eps||^2, in dB."""

    sor_db: float = -30.0
    """Target signal-to-outlier ratio (||A x||^2 / m) / (||o||^2 / |supp o|), in dB."""

    outlier_density: float = 0.0
    """The fraction of observations hit by an outlier."""

    trials: int = 1
    master_seed: int = 0

    methods: tuple[Method, ...] = ()
    """The methods to compare; empty means every method of the experiment."""

    alpha_pmc_grid: tuple[float, ...] = DEFAULT_ALPHA_PMC_GRID
    """Fractions of the convexity bound tried for PMC: gamma = mu / (alpha lambda_min^{++})."""

    mu_grid_size: int = 40
    """The size of every log-spaced regularization grid."""

    mu_grid_low: float = 1e-3
    mu_grid_high: float = 10.0

    lambda_grid_low: float = 1e-4
    """Bounds of the Tikhonov weight grids of ridge, Huber and LAD-ridge."""

    lambda_grid_high: float = 1e4

    small_grid_size: int = 10
    """The size of each grid of the two-parameter searches (Huber, LAD-ridge)."""

    robust_alpha: float = 0.9
    """The fraction of the convexity bound used by SORR and ORR."""

    huber_gamma_grid: tuple[float, ...] = (0.1, 1.0, 10.0, 100.0)

    rank: int = 2
    sparse_fraction: float = 0.05
    noise_sigma: float = 0.01
    sparse_scale: float = 10.0
    """The standard deviation of the nonzero entries of the sparse SPCP component."""

    spcp_mu_grid: tuple[float, ...] = (0.3, 1.0, 3.0)
    """Values tried for both mu_L and mu_S."""

    spcp_alpha: float = 0.9
    """The fraction of the SPCP bound: gamma = (mu_L + mu_S) / (4 alpha)."""

    classify_gamma: float = 2.0
    classify_alpha: float = 1.0
    """The fraction of the classification convexity bound used as mu."""

    classify_margin: float = 0.2
    """Samples closer than this to the true separating hyperplane are rejected."""

    record_wallclock: bool = False
    """Record run times; off by default so that reruns are byte-identical."""

    solver_max_iter: int = 5000
    solver_rel_tol: float = 1e-8

    extras: Mapping[str, Any] = field(default_factory=dict)
    """Free-form annotations copied to the manifest."""

    def __post_init__(self) -> None:
        if not self.methods:
            object.__setattr__(self, "methods", EXPERIMENT_METHODS[self.experiment])
        else:
            object.__setattr__(self, "methods", tuple(Method(m) for m in self.methods))
        unsupported = set(self.methods) - set(EXPERIMENT_METHODS[self.experiment])
        if unsupported:
            raise ConfigError(
                f"Methods {sorted(m.value for m in unsupported)} are not part of "
                f"{self.experiment.value}."
            )
        if self.trials < 1:
            raise ConfigError(f"trials must be at least 1, got {self.trials}.")
        if self.m < 1 or self.n < 1:
            raise ConfigError(f"m and n must be positive, got m={self.m}, n={self.n}.")
        if not 0 <= self.s <= self.n:
            raise ConfigError(f"s must lie in [0, n={self.n}], got {self.s}.")
        if not 0.0 <= self.outlier_density <= 1.0:
            raise ConfigError(f"outlier_density must lie in [0, 1], got {self.outlier_density}.")
        if self.master_seed < 0:
            raise ConfigError(f"master_seed must be non-negative, got {self.master_seed}.")
        if not all(0 < alpha <= 1 for alpha in self.alpha_pmc_grid) or not self.alpha_pmc_grid:
            raise ConfigError("alpha_pmc_grid must be a non-empty subset of (0, 1].")
        for name in ("robust_alpha", "spcp_alpha", "classify_alpha"):
            if not 0 < getattr(self, name) <= 1:
                raise ConfigError(f"{name} must lie in (0, 1], got {getattr(self, name)}.")
        if not 0 < self.mu_grid_low < self.mu_grid_high:
            raise ConfigError("The mu grid needs 0 < mu_grid_low < mu_grid_high.")
        if not 0 < self.lambda_grid_low < self.lambda_grid_high:
            raise ConfigError("The lambda grid needs 0 < lambda_grid_low < lambda_grid_high.")
        if self.mu_grid_size < 1 or self.small_grid_size < 1:
            raise ConfigError("Grid sizes must be positive.")
        if self.rank < 0 or self.rank > min(self.m, self.n):
            raise ConfigError(f"rank must lie in [0, min(m, n)], got {self.rank}.")
        if not 0 <= self.classify_margin < 1:
            raise ConfigError(
                f"classify_margin must lie in [0, 1), got {self.classify_margin}."
            )
        if self.solver_max_iter < 1:
            raise ConfigError(f"solver_max_iter must be positive, got {self.solver_max_iter}.")

    @property
    def outlier_count(self) -> int:
        return int(np.rint(self.outlier_density * self.m))

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ExperimentSpec":
        """
        Builds a spec from a dictionary. Fields that are not given take the preset of the
        experiment, then the dataclass default.

        :raises ConfigError: On unknown keys or invalid values.
        """
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"Unknown experiment keys: {sorted(unknown)}.")
        try:
            experiment = Experiment(data["experiment"])
        except (KeyError, ValueError) as error:
            raise ConfigError(
                f"Invalid experiment {data.get('experiment')!r}, expected one of "
                f"{[e.value for e in Experiment]}."
            ) from error
        values = {**PRESETS[experiment], **data, "experiment": experiment}
        for name in ("alpha_pmc_grid", "huber_gamma_grid", "spcp_mu_grid", "methods"):
            if name in values:
                values[name] = tuple(values[name])
        try:
            return cls(**values)
        except (TypeError, ValueError) as error:
            raise ConfigError(f"Invalid experiment specification: {error}") from error

    @classmethod
    def from_json(cls, path: Path) -> "ExperimentSpec":
        with open(path, encoding="utf-8") as file:
            return cls.from_dict(json.load(file))

    @classmethod
    def preset(cls, experiment: Experiment, **overrides: Any) -> "ExperimentSpec":
        return cls.from_dict({"experiment": experiment, **overrides})

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["experiment"] = self.experiment.value
        data["methods"] = [method.value for method in self.methods]
        for name in ("alpha_pmc_grid", "huber_gamma_grid", "spcp_mu_grid"):
            data[name] = list(data[name])
        data["extras"] = dict(self.extras)
        return data


@dataclass(frozen=True)
class TrialResult:
    """
    The metrics of one method on one trial. Column names follow `TrialCsvColumn`.
    """

    experiment: str
    trial: int
    method: str
    m: int
    n: int
    s: int
    snr_db: float
    sor_db: float
    density: float
    mu: float
    """The selected regularization parameter (NaN if the method has none)."""

    gamma: float
    """The selected envelope index (NaN if the method has none)."""

    mismatch: float
    """The error metric of the experiment; NaN if the trial failed."""

    sparseness: float
    """The Hoyer sparseness of the estimate; NaN if not applicable."""

    iterations: int
    wallclock_ms: float = 0.0

    @property
    def valid(self) -> bool:
        return bool(np.isfinite(self.mismatch))
