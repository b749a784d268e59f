"""
Analytical predictions for the receiving agents

Network divergence D_k(theta) = sum_s d[theta, s] x_{sk}; its unique minimizer
is the hypothesis agent k converges to, at rate D_k(theta*) - D_k(theta).
"""
import logging

import numpy as np

from weakgraph.core.config import get_settings
from weakgraph.core.exceptions import AmbiguousMinimizer, DimensionMismatch, WrongConfiguration
from weakgraph.services.analysis.schemas import AnalysisReport, NetworkDivergence, Region
from weakgraph.services.graph.schemas import AggregateWeights, LimitingMatrices, NetworkPartition
from weakgraph.services.models.divergence import canonical_D
from weakgraph.services.models.schemas import DivergenceMatrix

logger = logging.getLogger(__name__)

CANONICAL_MATCH_TOL = 1e-9
REGION_BY_THETA: dict[int, Region] = {1: "N1-dominant", 2: "middle", 3: "N2-dominant"}


def _values(D: DivergenceMatrix | np.ndarray) -> np.ndarray:
    return D.values if isinstance(D, DivergenceMatrix) else np.asarray(D, dtype=float)


def network_divergence(D: DivergenceMatrix | np.ndarray, x_k: np.ndarray) -> np.ndarray:
    """D_k(theta) for theta = 1..H under component-homogeneous models"""
    d = _values(D)
    x_k = np.asarray(x_k, dtype=float)
    if d.ndim != 2 or x_k.shape != (d.shape[1],):
        raise DimensionMismatch(f"D is {d.shape} but x_k has shape {x_k.shape}")
    return d @ x_k


def network_divergence_general(agent_divergences: np.ndarray, omega_k: np.ndarray) -> np.ndarray:
    """
    D_k(theta) = sum over sending agents l of omega_{lk} KL(f_l || L_l(theta))

    Args:
        agent_divergences: H x |S| matrix, column l for sending agent l
        omega_k: Limiting weights of receiving agent k, length |S|
    """
    agent_divergences = np.asarray(agent_divergences, dtype=float)
    omega_k = np.asarray(omega_k, dtype=float)
    if agent_divergences.ndim != 2 or omega_k.shape != (agent_divergences.shape[1],):
        raise DimensionMismatch(
            f"per-agent divergences are {agent_divergences.shape} but omega_k has shape {omega_k.shape}"
        )
    return agent_divergences @ omega_k


def limiting_hypothesis(divergences: np.ndarray, tie_tol: float | None = None) -> int:
    """1-based argmin; ties within tie_tol raise AmbiguousMinimizer"""
    tie_tol = get_settings().tie_tol if tie_tol is None else tie_tol
    divergences = np.asarray(divergences, dtype=float)
    if not np.all(np.isfinite(divergences)):
        raise DimensionMismatch("network divergences must be finite")
    candidates = np.flatnonzero(divergences - divergences.min() <= tie_tol)
    if candidates.size > 1:
        raise AmbiguousMinimizer([int(c) + 1 for c in candidates])
    return int(candidates[0]) + 1


def predicted_rates(divergences: np.ndarray, theta_star: int) -> np.ndarray:
    """y_k(theta) = D_k(theta*) - D_k(theta); zero at theta*, negative elsewhere"""
    divergences = np.asarray(divergences, dtype=float)
    return divergences[theta_star - 1] - divergences


def is_canonical(D: DivergenceMatrix | np.ndarray) -> bool:
    """True when D is the three-mean canonical matrix for some delta > 0"""
    d = _values(D)
    if d.shape != (3, 2) or d[1, 0] <= 0:
        return False
    delta = np.sqrt(2.0 * d[1, 0])
    return bool(np.allclose(d, canonical_D(delta).values, rtol=0.0, atol=CANONICAL_MATCH_TOL * max(1.0, delta**2)))


def canonical_thresholds(x_k: np.ndarray, D: DivergenceMatrix | np.ndarray | None = None) -> Region:
    """
    Region of a receiving agent in the canonical two-sender example

    x_{1k} > 0.75 gives N1-dominant, x_{1k} < 0.25 gives N2-dominant, middle
    otherwise; delta cancels. Boundary values raise AmbiguousMinimizer.
    """
    x_k = np.asarray(x_k, dtype=float)
    if x_k.shape != (2,):
        raise WrongConfiguration("canonical thresholds need exactly two sending components")
    if D is not None and not is_canonical(D):
        raise WrongConfiguration("divergence matrix is not the canonical (-delta, 0, +delta) example")
    theta_star = limiting_hypothesis(canonical_D(1.0).values @ x_k)
    return REGION_BY_THETA[theta_star]


def _entry(agent: int, divergences: np.ndarray, x_k: np.ndarray, canonical: bool) -> NetworkDivergence:
    try:
        theta_star = limiting_hypothesis(divergences)
    except AmbiguousMinimizer as exc:
        logger.warning("[analysis] agent %d: %s", agent, exc.detail)
        return NetworkDivergence(
            agent=agent,
            divergences=divergences.tolist(),
            unique=False,
            aggregate_weights=x_k.tolist(),
        )
    return NetworkDivergence(
        agent=agent,
        divergences=divergences.tolist(),
        theta_star=theta_star,
        unique=True,
        rates=predicted_rates(divergences, theta_star).tolist(),
        region=REGION_BY_THETA[theta_star] if canonical else None,
        aggregate_weights=x_k.tolist(),
    )


def analyze(D: DivergenceMatrix | np.ndarray, weights: AggregateWeights) -> AnalysisReport:
    """Per-receiving-agent predictions from the divergence matrix and aggregate weights"""
    d = _values(D)
    canonical = is_canonical(d)
    agents = [
        _entry(agent, network_divergence(d, weights.x[:, j]), weights.x[:, j], canonical)
        for j, agent in enumerate(weights.receiving_labels)
    ]
    return AnalysisReport(H=d.shape[0], S=d.shape[1], agents=agents)


def analyze_heterogeneous(agent_divergences: np.ndarray, lim: LimitingMatrices,
                          partition: NetworkPartition) -> AnalysisReport:
    """Same report from per-sending-agent divergences and the limiting weights Omega"""
    agent_divergences = np.asarray(agent_divergences, dtype=float)
    agents = []
    for j, agent in enumerate(partition.receiving_labels()):
        omega_k = lim.Omega[:, j]
        x_k = np.array([omega_k[block].sum() for block in partition.sending_slices()])
        agents.append(
            _entry(agent, network_divergence_general(agent_divergences, omega_k), x_k, canonical=False)
        )
    return AnalysisReport(H=agent_divergences.shape[0], S=partition.S, agents=agents)
