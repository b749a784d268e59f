"""Sampling and likelihood evaluation for agent models"""
import numpy as np

from weakgraph.core.exceptions import OutOfSupport
from weakgraph.services.models.schemas import AgentModel


def sample(model: AgentModel, rng: np.random.Generator) -> float:
    """Draw one observation from the agent's true distribution"""
    return float(model.sample(rng))


def log_likelihood(model: AgentModel, xi: float, theta: int) -> float:
    """
    Exact log L(xi | theta) for a 1-based hypothesis

    Args:
        model: Agent model
        xi: Observation
        theta: Hypothesis label in 1..H

    Returns:
        Log-density of the theta-th likelihood at xi
    """
    if not 1 <= theta <= model.H:
        raise IndexError(f"theta={theta} outside 1..{model.H}")
    likelihood = model.likelihoods[theta - 1]
    if not likelihood.in_support(xi):
        raise OutOfSupport(f"observation {xi!r} outside the support of {likelihood.kind} likelihood")
    return float(likelihood.log_pdf(xi))
