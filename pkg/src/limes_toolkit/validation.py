"""
This module contains the result type of the convexity checks run on LiMES problems.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class ConvexityReport:
    """The result of a convexity check of the smooth part of a LiMES objective."""

    satisfied: bool
    """Whether the check passed."""

    margin: float
    """Smallest eigenvalue of the Gram-difference matrix, or the slack of a closed-form bound."""

    method: str
    """The name of the test that produced this report."""

    necessary: bool = True
    """
    Whether a failed check also proves non-convexity. False for user-assembled problems,
    for which the Gram-difference test is only known to be sufficient.
    """

    details: str | None = None
    """A human readable description of the outcome."""

    tolerance: float = 0.0
    """The negative slack accepted on the margin."""
