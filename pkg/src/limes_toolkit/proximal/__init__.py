"""This module defines the public interface of the seed catalog and the envelope calculus."""

from limes_toolkit.proximal.envelope import (
    conjugate_envelope,
    conjugate_prox,
    enhancement_minimizer,
    enhancement_value,
    evaluate,
    moreau_envelope,
    moreau_gradient,
    prox,
    scaled_prox,
    shifted_conjugate_prox,
)
from limes_toolkit.proximal.seeds import (
    BlockSum,
    BoxSupport,
    L1Norm,
    NuclearNorm,
    ProximableSeed,
    SeedBlock,
    Shifted,
    soft_threshold,
)
