"""This module contains the constants shared across the limes_toolkit package."""

from enum import Enum, IntEnum


class Application(str, Enum):
    """
    Enum to represent the problem families that can be built from a `ProblemDocument`.
    """

    PMC = "pmc"
    """Debiased sparse modeling with the projective minimax concave penalty."""

    MC = "mc"
    """Sparse modeling with the plain minimax concave penalty (no projection)."""

    SORR = "sorr"
    """Stable outlier-robust regression."""

    ORR = "orr"
    """Outlier-robust regression (SORR without the noise variable)."""

    SPCP = "spcp"
    """Stable principal component pursuit."""

    CLASSIFY = "classify"
    """Classification with the Moreau-enhanced hinge loss."""

    MC_TV = "mc_tv"
    """Total-variation denoising with the minimax concave penalty."""

    MEN = "men"
    """Matrix denoising with the Moreau-enhanced nuclear norm."""

    GENERIC = "generic"
    """A user-assembled problem with no closed-form convexity bound."""


class SolverName(str, Enum):
    """
    Enum to represent the solvers exposed on the command line.
    """

    PROX_GRAD = "prox-grad"
    PRIMAL_DUAL = "primal-dual"
    ISTA = "ista"


class ExitCode(IntEnum):
    """
    Process exit codes. They are the only machine-readable failure channel of the CLI.
    """

    OK = 0
    INVALID_CONFIG = 2
    NONCONVEX = 3
    NUMERICAL_FAILURE = 4


RANK_CUTOFF_FACTOR = 1e-12
"""Singular values below max(rows, cols) * sigma_max * RANK_CUTOFF_FACTOR count as zero."""

SPADE_TOL_FACTOR = 1e-9
"""The convexity test accepts a smallest eigenvalue above -SPADE_TOL_FACTOR * (1 + ||S||_2)."""

CSV_FLOAT_FORMAT = "%.17g"
"""Float format used for every numeric CSV so that values round-trip exactly."""

THREADS_ENV_VAR = "LIMES_THREADS"
"""Environment variable capping the number of concurrently executed trials."""
