"""
KL divergences between truths and likelihoods, and the divergence matrix D

Gaussian pairs use 0.5 (a - b)^2; Beta pairs use adaptive quadrature (the
digamma closed form is kept as an oracle); Monte-Carlo works for any pair.
"""
import logging
from collections.abc import Sequence

import numpy as np
from scipy import integrate, special

from weakgraph.core.config import get_settings
from weakgraph.core.exceptions import (
    DegenerateMeans,
    DimensionMismatch,
    DivergenceInfinite,
    InvalidSpec,
    NumericalError,
)
from weakgraph.services.models.schemas import (
    AgentModel,
    BetaDistribution,
    DivergenceMatrix,
    UnitVarianceGaussian,
)

logger = logging.getLogger(__name__)

MEANS_TOL = 1e-12


def gaussian_kl(truth: UnitVarianceGaussian, likelihood: UnitVarianceGaussian) -> float:
    return 0.5 * (truth.mean - likelihood.mean) ** 2


def beta_kl_closed_form(truth: BetaDistribution, likelihood: BetaDistribution) -> float:
    a1, b1, a2, b2 = truth.alpha, truth.beta, likelihood.alpha, likelihood.beta
    return float(
        special.betaln(a2, b2)
        - special.betaln(a1, b1)
        + (a1 - a2) * special.digamma(a1)
        + (b1 - b2) * special.digamma(b1)
        + (a2 - a1 + b2 - b1) * special.digamma(a1 + b1)
    )


def _quadrature_kl(truth, likelihood, tol: float) -> float:
    def integrand(x: float) -> float:
        log_f = float(truth.log_pdf(x))
        if not np.isfinite(log_f):
            return 0.0
        log_l = float(likelihood.log_pdf(x))
        if not np.isfinite(log_l):
            raise DivergenceInfinite(
                f"{likelihood.kind} likelihood vanishes at x={x:g} inside the truth support"
            )
        return float(np.exp(log_f) * (log_f - log_l))

    lo, hi = truth.quad_bounds()
    value, abserr = integrate.quad(integrand, lo, hi, epsabs=tol, epsrel=tol, limit=200)
    if not np.isfinite(value):
        raise DivergenceInfinite("quadrature of the KL integrand diverged")
    if value < -10 * max(tol, abserr):
        raise NumericalError(f"quadrature returned a negative divergence {value:.3e}")
    return max(value, 0.0)


def monte_carlo_divergence(truth, likelihood, n: int, rng: np.random.Generator) -> tuple[float, float]:
    """
    Monte-Carlo KL estimate with its standard error

    Args:
        truth: Distribution the samples are drawn from
        likelihood: Reference distribution
        n: Number of samples (at least 2)
        rng: Random generator owned by the caller

    Returns:
        Tuple (estimate, standard_error)
    """
    if n < 2:
        raise InvalidSpec(f"monte-carlo divergence needs at least 2 samples, got {n}")
    draws = truth.sample(rng, size=n)
    log_l = likelihood.log_pdf(draws)
    if not np.all(np.isfinite(log_l)):
        raise DivergenceInfinite(f"{likelihood.kind} likelihood vanishes on sampled truth data")
    terms = truth.log_pdf(draws) - log_l
    return float(terms.mean()), float(terms.std(ddof=1) / np.sqrt(n))


def _resolve(truth, likelihood, method: str, tol: float, samples: int,
             rng: np.random.Generator) -> tuple[float, float | None, str]:
    if truth == likelihood:
        return 0.0, None, "analytic"

    both_gaussian = truth.kind == likelihood.kind == "gaussian"
    both_beta = truth.kind == likelihood.kind == "beta"
    if method == "auto":
        method = "analytic" if both_gaussian else "quadrature"

    if method == "analytic":
        if both_gaussian:
            return gaussian_kl(truth, likelihood), None, "analytic"
        if both_beta:
            return beta_kl_closed_form(truth, likelihood), None, "analytic"
        raise InvalidSpec(f"no closed form for KL({truth.kind} || {likelihood.kind})")
    if method == "quadrature":
        return _quadrature_kl(truth, likelihood, tol), None, "quadrature"
    if method == "monte_carlo":
        value, stderr = monte_carlo_divergence(truth, likelihood, samples, rng)
        logger.info("[kl] monte-carlo estimate %.6f +- %.2e (%d samples)", value, stderr, samples)
        return value, stderr, "monte-carlo"
    raise InvalidSpec(f"unknown divergence method {method!r}")


def _sampling(samples: int | None, rng: np.random.Generator | None) -> tuple[int, np.random.Generator]:
    settings = get_settings()
    samples = settings.mc_samples if samples is None else samples
    if samples < 2:
        raise InvalidSpec(f"monte-carlo divergence needs at least 2 samples, got {samples}")
    return samples, np.random.default_rng(settings.mc_seed) if rng is None else rng


def kl_divergence_with_error(truth, likelihood, method: str = "auto", tol: float | None = None,
                             samples: int | None = None,
                             rng: np.random.Generator | None = None) -> tuple[float, float | None]:
    """
    D[truth || likelihood] with the Monte-Carlo standard error

    Args:
        truth: True distribution descriptor
        likelihood: Likelihood descriptor
        method: auto | analytic | quadrature | monte_carlo
        tol: Absolute quadrature tolerance (settings.quad_tol when None)
        samples: Monte-Carlo sample count (settings.mc_samples when None)
        rng: Generator for the Monte-Carlo path (seeded from settings.mc_seed when None)

    Returns:
        Tuple (divergence, standard_error); the error is None for deterministic methods
    """
    tol = get_settings().quad_tol if tol is None else tol
    samples, rng = _sampling(samples, rng)
    value, stderr, _ = _resolve(truth, likelihood, method, tol, samples, rng)
    return value, stderr


def kl_divergence(truth, likelihood, method: str = "auto", tol: float | None = None,
                  samples: int | None = None, rng: np.random.Generator | None = None) -> float:
    """Nonnegative D[truth || likelihood]; see kl_divergence_with_error"""
    value, _ = kl_divergence_with_error(truth, likelihood, method, tol, samples, rng)
    return value


def divergence_matrix(sending_models: Sequence[AgentModel], H: int | None = None,
                      method: str = "auto", tol: float | None = None, samples: int | None = None,
                      rng: np.random.Generator | None = None) -> DivergenceMatrix:
    """Fill d[theta, s] from one model per sending component; one rng feeds every Monte-Carlo entry"""
    if not sending_models:
        raise DimensionMismatch("divergence matrix needs at least one sending model")
    H = sending_models[0].H if H is None else H
    if any(model.H != H for model in sending_models):
        raise DimensionMismatch(f"every sending model must carry H={H} likelihoods")

    tol = get_settings().quad_tol if tol is None else tol
    samples, rng = _sampling(samples, rng)
    values = np.zeros((H, len(sending_models)))
    provenance = [["analytic"] * len(sending_models) for _ in range(H)]
    for s, model in enumerate(sending_models):
        for theta, likelihood in enumerate(model.likelihoods):
            values[theta, s], _, provenance[theta][s] = _resolve(
                model.truth, likelihood, method, tol, samples, rng
            )
    return DivergenceMatrix(values=values, provenance=tuple(tuple(row) for row in provenance))


def per_agent_divergences(models: Sequence[AgentModel], method: str = "auto", tol: float | None = None,
                          samples: int | None = None, rng: np.random.Generator | None = None) -> np.ndarray:
    """H x len(models) matrix of KL(f_l || L_l(theta)) for heterogeneous sending agents"""
    return divergence_matrix(models, method=method, tol=tol, samples=samples, rng=rng).values


def structured_gaussian_D(means: Sequence[float], assignment: Sequence[float]) -> DivergenceMatrix:
    """
    d[theta, s] = 0.5 (m_theta - nu_s)^2 for the structured Gaussian model

    Args:
        means: Likelihood means m_1..m_H (distinct)
        assignment: True means nu_1..nu_S, each one of the m_theta

    Returns:
        Analytic DivergenceMatrix
    """
    m = np.asarray(means, dtype=float)
    nu = np.asarray(assignment, dtype=float)
    gaps = np.abs(m[:, None] - m[None, :])[np.triu_indices(len(m), k=1)]
    if np.any(gaps <= MEANS_TOL):
        raise DegenerateMeans("likelihood means must be distinct; D would lose rank")
    for value in nu:
        if not np.any(np.abs(m - value) <= MEANS_TOL):
            raise InvalidSpec(f"true mean {value:g} is not one of the likelihood means")
    if len(np.unique(nu)) < len(nu):
        logger.warning("[models] repeated true means across sending components: D has collapsed rank")
    return DivergenceMatrix.analytic(0.5 * (m[:, None] - nu[None, :]) ** 2)


def canonical_D(delta: float = 1.0) -> DivergenceMatrix:
    """Means (-delta, 0, +delta); component 1 truth -delta, component 2 truth +delta"""
    return structured_gaussian_D([-delta, 0.0, delta], [-delta, delta])
