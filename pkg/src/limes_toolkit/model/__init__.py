"""This module defines the public interface of the LiMES problem model."""

from limes_toolkit.model.applications import (
    make_classify,
    make_mc,
    make_mc_tv,
    make_men,
    make_orr,
    make_pmc,
    make_sorr,
    make_spcp,
    split_spcp,
)
from limes_toolkit.model.convexity import (
    check_convexity,
    closed_form_bound,
    closed_form_report,
    convexity_bound_classify,
    convexity_bound_mc,
    convexity_bound_mc_tv,
    convexity_bound_men,
    convexity_bound_orr,
    convexity_bound_pmc,
    convexity_bound_sorr,
    convexity_bound_spcp,
    gram_difference,
    spade_check,
)
from limes_toolkit.model.document import ProblemDocument, build_problem
from limes_toolkit.model.problem import (
    LimesProblem,
    limes_penalty_eval,
    normalized_pmc_eval,
    objective_eval,
    smooth_eval,
    smooth_gradient,
)
