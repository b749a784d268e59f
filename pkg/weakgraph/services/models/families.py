"""
Model families used by the experiments

- canonical: means (-delta, 0, +delta), component 1 says -delta, component 2 says +delta
- structured Gaussian: shared likelihood means, distinct true means per component
- perturbed Gaussian: likelihood means theta + eps, eps equicorrelated Gaussian
- Beta: likelihood Beta(theta + 1 + u, 2), u ~ U(-w, w); truth Beta(s + 1, 2)
"""
from collections.abc import Sequence

import numpy as np

from weakgraph.core.exceptions import InvalidCorrelation, InvalidShape, InvalidSpec
from weakgraph.services.models.schemas import AgentModel, BetaDistribution, UnitVarianceGaussian

BETA_SECOND_SHAPE = 2.0


def _gaussian_model(truth_mean: float, likelihood_means: Sequence[float],
                    offsets: Sequence[float] | None = None) -> AgentModel:
    return AgentModel(
        truth=UnitVarianceGaussian(mean=truth_mean),
        likelihoods=tuple(UnitVarianceGaussian(mean=float(m)) for m in likelihood_means),
        offsets=None if offsets is None else tuple(float(o) for o in offsets),
    )


def canonical_family(delta: float = 1.0, receiving_truth_mean: float = 0.0) -> tuple[list[AgentModel], AgentModel]:
    """Returns ([model of N1, model of N2], receiving model)"""
    if delta <= 0:
        raise InvalidSpec("delta must be positive")
    means = [-delta, 0.0, delta]
    sending = [_gaussian_model(-delta, means), _gaussian_model(delta, means)]
    return sending, _gaussian_model(receiving_truth_mean, means)


def structured_gaussian_family(means: Sequence[float], assignment: Sequence[float]) -> list[AgentModel]:
    """One model per sending component: truth nu_s, shared likelihood means"""
    return [_gaussian_model(float(nu), means) for nu in assignment]


def equicorrelated_offsets(n: int, variance: float, correlation: float,
                           rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """
    Zero-mean Gaussian vector(s) with Var = variance and pairwise correlation rho

    Shared factor plus independent residual: with z ~ N(0, I_n),
    eps = sigma * (sqrt(1 - rho) z + (sqrt(1 - rho + n rho) - sqrt(1 - rho)) mean(z) 1),
    the symmetric square root of sigma^2 ((1 - rho) I + rho 1 1^T).
    """
    if variance < 0:
        raise InvalidSpec("variance must be nonnegative")
    if n > 1 and not (-1.0 / (n - 1) < correlation < 1.0):
        raise InvalidCorrelation(f"correlation must lie in ({-1.0 / (n - 1):.4g}, 1) for n={n}")
    shape = (n,) if size is None else (size, n)
    z = rng.standard_normal(shape)
    residual = np.sqrt(1.0 - correlation)
    shared = np.sqrt(1.0 - correlation + n * correlation) - residual
    return np.sqrt(variance) * (residual * z + shared * z.mean(axis=-1, keepdims=True))


def perturbed_gaussian_family(H: int, S: int, variance: float, correlation: float, seed: int,
                              truth_mean: float = 1.0) -> list[AgentModel]:
    """
    S models with likelihood means theta + eps[theta, s], theta = 1..H

    All H*S offsets come from one equicorrelated draw and are stored on the models.
    """
    rng = np.random.default_rng(seed)
    eps = equicorrelated_offsets(H * S, variance, correlation, rng).reshape(H, S)
    thetas = np.arange(1, H + 1, dtype=float)
    return [_gaussian_model(truth_mean, thetas + eps[:, s], eps[:, s]) for s in range(S)]


def beta_family(H: int, S: int, half_width: float, seed: int,
                truth_alpha: float | None = None) -> list[AgentModel]:
    """
    S models with likelihood Beta(theta + 1 + u[theta, s], 2)

    Args:
        H: Number of hypotheses
        S: Number of models to draw
        half_width: u ~ Uniform(-half_width, half_width)
        seed: Seed of the perturbation draw
        truth_alpha: First shape of every truth; None gives s + 1 for model s

    Returns:
        List of AgentModel
    """
    # smallest likelihood shape is 1 + 1 - half_width
    if half_width < 0 or half_width >= 2.0:
        raise InvalidShape(f"half_width must lie in [0, 2) to keep shapes positive, got {half_width}")
    if truth_alpha is not None and truth_alpha <= 0:
        raise InvalidShape("truth_alpha must be positive")

    rng = np.random.default_rng(seed)
    u = rng.uniform(-half_width, half_width, size=(H, S))
    thetas = np.arange(1, H + 1, dtype=float)
    models = []
    for s in range(S):
        alpha = float(s + 2) if truth_alpha is None else truth_alpha
        models.append(
            AgentModel(
                truth=BetaDistribution(alpha=alpha, beta=BETA_SECOND_SHAPE),
                likelihoods=tuple(
                    BetaDistribution(alpha=float(t + 1.0 + u[i, s]), beta=BETA_SECOND_SHAPE)
                    for i, t in enumerate(thetas)
                ),
                offsets=tuple(float(v) for v in u[:, s]),
            )
        )
    return models
