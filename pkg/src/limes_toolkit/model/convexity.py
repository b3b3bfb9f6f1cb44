"""
This module contains the convexity checks of the smooth part of a LiMES objective: the
generic Gram-difference test and the closed-form bounds on mu of each application.

The smooth part is convex if S = M1^T M1 - mu M2^T L^T D^2 L M2 is positive semidefinite;
for the built-in applications this condition is also necessary and reduces to a bound on mu.
"""

import logging

import numpy.typing as npt
import scipy.linalg

from limes_toolkit.constants import SPADE_TOL_FACTOR, Application
from limes_toolkit.errors import InputError
from limes_toolkit.linop.operators import as_matrix, first_difference
from limes_toolkit.linop.spectral import lambda_min_pp_gram, smallest_eigenvalue
from limes_toolkit.model.problem import LimesProblem
from limes_toolkit.types import FloatArray
from limes_toolkit.validation import ConvexityReport

LOG = logging.getLogger(__name__)


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if not value > 0:
            raise InputError(f"{name} must be strictly positive, got {value}.")


def gram_difference(problem: LimesProblem) -> FloatArray:
    """The symmetric matrix M1^T M1 - mu M2^T L^T D^2 L M2."""
    m1 = problem.a1.matrix
    gram = m1.T @ m1
    if problem.debias:
        enhanced = problem.enhanced_m2
        gram = gram - problem.mu * enhanced.T @ (problem.d.diagonal()[:, None] ** 2 * enhanced)
    return 0.5 * (gram + gram.T)


def spade_check(problem: LimesProblem, tol: float | None = None) -> ConvexityReport:
    """
    Checks that the smooth part of the objective is convex by forming the Gram difference
    explicitly and computing its smallest eigenvalue.

    :param problem: The problem to check.
    :param tol: Accepted negative slack. Defaults to SPADE_TOL_FACTOR * (1 + ||S||_2).
    :return: A report whose margin is the smallest eigenvalue.
    """
    gram = gram_difference(problem)
    if tol is None:
        tol = SPADE_TOL_FACTOR * (1.0 + float(scipy.linalg.norm(gram, 2)))
    margin = smallest_eigenvalue(gram)
    satisfied = bool(margin >= -tol)
    necessary = problem.application != Application.GENERIC
    details = None
    if not satisfied:
        details = f"Smallest eigenvalue {margin:.6e} is below -{tol:.3e}."
        if not necessary:
            details += " The test is only sufficient for this problem."
    return ConvexityReport(
        satisfied=satisfied,
        margin=margin,
        method=spade_check.__name__,
        necessary=necessary,
        details=details,
        tolerance=tol,
    )


def _lambda_max_exact(m: npt.ArrayLike) -> float:
    # a full SVD, so that a bound sits exactly on the eigenvalue boundary
    return float(scipy.linalg.svdvals(as_matrix(m, "M"))[0] ** 2)


def convexity_bound_pmc(a: npt.ArrayLike, gamma: float) -> float:
    """The largest mu keeping the PMC problem convex: gamma * lambda_min^{++}(A^T A)."""
    _require_positive(gamma=gamma)
    return gamma * lambda_min_pp_gram(a)


def convexity_bound_mc(a: npt.ArrayLike, gamma: float) -> float:
    """
    The largest mu keeping the plain MC problem convex: gamma * lambda_min(A^T A), which is
    zero for underdetermined systems.
    """
    _require_positive(gamma=gamma)
    a = as_matrix(a, "A")
    if a.shape[0] < a.shape[1]:
        return 0.0
    sigma = scipy.linalg.svdvals(a)
    return gamma * float(sigma[-1] ** 2)


def convexity_bound_sorr(
    a: npt.ArrayLike, sigma_x: float, sigma_eps: float, gamma: float
) -> float:
    """The largest mu keeping SORR convex: gamma / (sigma_eps^2 + sigma_x^2 lambda_max(A^T A))."""
    _require_positive(sigma_x=sigma_x, sigma_eps=sigma_eps, gamma=gamma)
    return gamma / (sigma_eps**2 + sigma_x**2 * _lambda_max_exact(a))


def convexity_bound_orr(a: npt.ArrayLike, gamma: float) -> float:
    """The largest mu keeping ORR convex: gamma / lambda_max(A^T A)."""
    _require_positive(gamma=gamma)
    return gamma / _lambda_max_exact(a)


def convexity_bound_spcp(gamma: float) -> float:
    """The largest admissible mu_L + mu_S for SPCP: 4 gamma."""
    _require_positive(gamma=gamma)
    return 4.0 * gamma


def convexity_bound_classify(m2: npt.ArrayLike, gamma: float) -> float:
    """The largest mu keeping the enhanced hinge problem convex: gamma / lambda_max(M2^T M2)."""
    _require_positive(gamma=gamma)
    return gamma / _lambda_max_exact(m2)


def convexity_bound_mc_tv(n: int, gamma: float) -> float:
    """The largest mu keeping MC-TV denoising of a length-n signal convex."""
    _require_positive(gamma=gamma)
    return gamma / _lambda_max_exact(first_difference(n))


def convexity_bound_men(gamma: float) -> float:
    """The largest mu keeping Moreau-enhanced nuclear-norm denoising convex: gamma."""
    _require_positive(gamma=gamma)
    return gamma


def closed_form_bound(problem: LimesProblem) -> tuple[float, float] | None:
    """
    The closed-form bound matching the application of `problem`, as the pair
    (bound, value) that must satisfy value <= bound. None for generic problems.
    """
    params = problem.parameters
    match problem.application:
        case Application.PMC:
            return convexity_bound_pmc(problem.a1.matrix, params["gamma"]), problem.mu
        case Application.MC:
            return convexity_bound_mc(problem.a1.matrix, params["gamma"]), problem.mu
        case Application.SORR:
            n = problem.x_dim - problem.z_dim
            return (
                convexity_bound_sorr(
                    problem.a2.matrix[:, :n],
                    params["sigma_x"],
                    params["sigma_eps"],
                    params["gamma"],
                ),
                problem.mu,
            )
        case Application.ORR:
            return convexity_bound_orr(problem.a2.matrix, params["gamma"]), problem.mu
        case Application.SPCP:
            return convexity_bound_spcp(params["gamma"]), params["mu_l"] + params["mu_s"]
        case Application.CLASSIFY:
            return convexity_bound_classify(problem.a2.matrix, params["gamma"]), problem.mu
        case Application.MC_TV:
            return convexity_bound_mc_tv(problem.x_dim, params["gamma"]), problem.mu
        case Application.MEN:
            return convexity_bound_men(params["gamma"]), problem.mu
    return None


def closed_form_report(problem: LimesProblem) -> ConvexityReport | None:
    """
    Checks the closed-form bound of the application. The margin is the slack bound - value,
    compared with a relative tolerance of SPADE_TOL_FACTOR.
    """
    bound_and_value = closed_form_bound(problem)
    if bound_and_value is None:
        return None
    bound, value = bound_and_value
    margin = float(bound - value)
    tol = SPADE_TOL_FACTOR * max(1.0, abs(bound))
    return ConvexityReport(
        satisfied=margin >= -tol,
        margin=margin,
        method=f"{closed_form_report.__name__}:{problem.application.value}",
        details=f"bound {bound:.6e}, value {value:.6e}",
        tolerance=tol,
    )


def check_convexity(
    problem: LimesProblem, allow_nonconvex: bool = False
) -> ConvexityReport:
    """
    Runs the Gram-difference test and logs the outcome. Failure is logged as a warning when
    the non-convex override is on.
    """
    report = spade_check(problem)
    if report.satisfied:
        LOG.debug("Convexity margin %.6e.", report.margin)
    elif allow_nonconvex:
        LOG.warning(
            "Smooth part is not convex (margin %.6e); running without global guarantee.",
            report.margin,
        )
    return report
