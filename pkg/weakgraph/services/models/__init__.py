"""Agent model services package"""
from weakgraph.services.models.divergence import (
    beta_kl_closed_form,
    canonical_D,
    divergence_matrix,
    kl_divergence,
    kl_divergence_with_error,
    monte_carlo_divergence,
    per_agent_divergences,
    structured_gaussian_D,
)
from weakgraph.services.models.families import (
    beta_family,
    canonical_family,
    equicorrelated_offsets,
    perturbed_gaussian_family,
    structured_gaussian_family,
)
from weakgraph.services.models.schemas import (
    AgentModel,
    BetaDistribution,
    DivergenceMatrix,
    HypothesisSet,
    UnitVarianceGaussian,
)
from weakgraph.services.models.service import log_likelihood, sample

__all__ = [
    "AgentModel",
    "BetaDistribution",
    "DivergenceMatrix",
    "HypothesisSet",
    "UnitVarianceGaussian",
    "beta_family",
    "beta_kl_closed_form",
    "canonical_D",
    "canonical_family",
    "divergence_matrix",
    "equicorrelated_offsets",
    "kl_divergence",
    "kl_divergence_with_error",
    "log_likelihood",
    "monte_carlo_divergence",
    "per_agent_divergences",
    "perturbed_gaussian_family",
    "sample",
    "structured_gaussian_D",
    "structured_gaussian_family",
]
