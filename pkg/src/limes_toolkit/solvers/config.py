"""
This module defines the configuration and the result types shared by the solvers.
"""

from dataclasses import asdict, dataclass, field, fields
from typing import Any, Literal, Mapping

from limes_toolkit.errors import ConfigError
from limes_toolkit.types import FloatArray

AUTO = "auto"

DEFAULT_MAX_ITER = 50_000
DEFAULT_REL_TOL = 1e-10
DEFAULT_STEP_FRACTION = 0.99
"""Automatic steps are this fraction of their admissible upper bound."""

Step = float | Literal["auto"]


def _check_step(name: str, value: Any) -> None:
    if value == AUTO:
        return
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not value > 0:
        raise ConfigError(f"{name} must be 'auto' or a positive number, got {value!r}.")


@dataclass(frozen=True)
class SolverConfig:
    """
    Iteration controls and step sizes of a solve.
    """

    max_iter: int = DEFAULT_MAX_ITER
    """The maximum number of iterations."""

    rel_tol: float = DEFAULT_REL_TOL
    """
    The run stops once ||x_{k+1} - x_k|| / max(1, ||x_k||) <= rel_tol (and the same holds for
    the dual iterate of the primal-dual method).
    """

    step_beta: Step = AUTO
    """The step of the proximal gradient method."""

    tau: Step = AUTO
    """The primal step of the primal-dual method."""

    sigma: Step = AUTO
    """The dual step of the primal-dual method."""

    relaxation: float = 1.0
    """The constant relaxation parameter of the primal-dual method, in (0, 1]."""

    record_trace: bool = True
    """Whether to record the objective and residual at every iteration."""

    allow_nonconvex: bool = False
    """Run even if the smooth part of the objective is not convex."""

    step_fraction: float = DEFAULT_STEP_FRACTION
    """The fraction of the admissible bound used by automatic steps, in (0, 1)."""

    def __post_init__(self) -> None:
        if isinstance(self.max_iter, bool) or not isinstance(self.max_iter, int):
            raise ConfigError(f"max_iter must be an integer, got {self.max_iter!r}.")
        if self.max_iter < 1:
            raise ConfigError(f"max_iter must be at least 1, got {self.max_iter}.")
        if not self.rel_tol >= 0:
            raise ConfigError(f"rel_tol must be non-negative, got {self.rel_tol}.")
        for name in ("step_beta", "tau", "sigma"):
            _check_step(name, getattr(self, name))
        if not 0 < self.relaxation <= 1:
            raise ConfigError(f"relaxation must lie in (0, 1], got {self.relaxation}.")
        if not 0 < self.step_fraction < 1:
            raise ConfigError(f"step_fraction must lie in (0, 1), got {self.step_fraction}.")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SolverConfig":
        """
        Builds a configuration from a dictionary, e.g. the "solver" section of a JSON file.

        :raises ConfigError: On unknown keys or out-of-range values.
        """
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"Unknown solver configuration keys: {sorted(unknown)}.")
        try:
            return cls(**data)
        except TypeError as error:
            raise ConfigError(f"Invalid solver configuration: {error}") from error

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class SolveResult:
    """
    The outcome of a solve.
    """

    x: FloatArray
    """The final primal iterate."""

    v: FloatArray | None
    """The final dual iterate (primal-dual method only)."""

    objective_trace: list[float]
    """The objective after every iteration, if recorded."""

    residual_trace: list[float]
    """The relative iterate change after every iteration, if recorded."""

    iterations: int
    """The number of iterations run."""

    converged: bool
    """Whether the stopping rule was met before `max_iter`."""

    global_guarantee: bool = True
    """False if the solve ran without convexity of the smooth part."""

    steps: Mapping[str, float] = field(default_factory=dict)
    """The resolved step sizes."""

    convexity_margin: float | None = None
    """The smallest eigenvalue of the convexity test, when it was run."""
