"""This module defines the public interface of the solvers."""

from limes_toolkit.solvers.config import SolverConfig, SolveResult
from limes_toolkit.solvers.ista import ista
from limes_toolkit.solvers.primal_dual import primal_dual_debiasing
from limes_toolkit.solvers.prox_gradient import proximal_debiasing_gradient
from limes_toolkit.solvers.residual import fixed_point_residual
