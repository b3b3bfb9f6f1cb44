"""This module defines the exceptions raised by the limes_toolkit package."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from limes_toolkit.validation import ConvexityReport


class LimesError(Exception):
    """Base class of every error raised by limes_toolkit."""


class InputError(LimesError, ValueError):
    """Invalid input data: shapes, zero operators, non-positive parameters, ragged CSV."""


class ConfigError(LimesError, ValueError):
    """A solver or experiment configuration is outside its admissible range."""


class ConvexityError(LimesError):
    """A solver refused to run because the smooth part of the objective is not convex."""

    def __init__(self, report: ConvexityReport) -> None:
        super().__init__(
            f"Convexity condition violated (margin {report.margin:.3e}, method "
            f"{report.method}). Use the non-convex override to run anyway."
        )
        self.report = report


class NumericalError(LimesError, ArithmeticError):
    """An iterative numerical routine failed (non-convergence, non-finite values)."""


class DegenerateInputError(NumericalError):
    """Every singular value of the input is below the rank cutoff."""


class TuningError(LimesError):
    """A regularization parameter could not be tuned to the requested target."""
