"""
Topology inference service

Recovers the aggregate weights x_k of a receiving agent from its limiting
(or empirical) log-belief rates y_k. With B_k = (1 e_{theta*}^T - I) D the rates
satisfy y_k = B_k x_k; stacking the sum-to-one row gives C_k x_k = [y_k; 1],
which has a unique solution exactly when rank(C_k) = S.
"""
import logging
from collections.abc import Sequence

import numpy as np
from scipy import linalg
from scipy.optimize import linprog

from weakgraph.core.config import get_settings
from weakgraph.core.exceptions import DimensionMismatch, InconsistentData, InvalidSpec
from weakgraph.services.learning.schemas import TrajectoryRecord
from weakgraph.services.models.schemas import DivergenceMatrix
from weakgraph.services.topology.schemas import (
    FeasibilityReport,
    TopologyEstimate,
    TopologySolveResult,
    TopologySystem,
)

logger = logging.getLogger(__name__)

CONSISTENCY_TOL = 1e-9
SUM_TOL = 1e-8


def _values(D: DivergenceMatrix | np.ndarray) -> np.ndarray:
    d = D.values if isinstance(D, DivergenceMatrix) else np.asarray(D, dtype=float)
    if d.ndim != 2:
        raise DimensionMismatch(f"divergence matrix must be 2-D, got shape {d.shape}")
    return d


def anchored_differences(D: DivergenceMatrix | np.ndarray, theta_star: int) -> np.ndarray:
    """B = (1 e_{theta*}^T - I) D; row theta is d[theta*] - d[theta]"""
    d = _values(D)
    H = d.shape[0]
    if not 1 <= theta_star <= H:
        raise InvalidSpec(f"theta_star must lie in 1..{H}, got {theta_star}")
    anchor = np.zeros((H, H))
    anchor[:, theta_star - 1] = 1.0
    return (anchor - np.eye(H)) @ d


def augmented_matrix(D: DivergenceMatrix | np.ndarray, theta_star: int) -> np.ndarray:
    B = anchored_differences(D, theta_star)
    return np.vstack([B, np.ones((1, B.shape[1]))])


def build_system(D: DivergenceMatrix | np.ndarray, theta_star: int, y_k: np.ndarray) -> TopologySystem:
    d = _values(D)
    y_k = np.asarray(y_k, dtype=float)
    if y_k.shape != (d.shape[0],):
        raise DimensionMismatch(f"y_k must have {d.shape[0]} entries, got shape {y_k.shape}")
    B = anchored_differences(d, theta_star)
    if abs(y_k[theta_star - 1]) > CONSISTENCY_TOL:
        raise InconsistentData(f"y_k(theta*) must be 0, got {y_k[theta_star - 1]:.3e}")
    return TopologySystem(
        B=B,
        C=np.vstack([B, np.ones((1, B.shape[1]))]),
        y_tilde=np.append(y_k, 1.0),
        theta_star=theta_star,
    )


def numerical_rank(M: np.ndarray, rel_tol: float | None = None) -> int:
    """Singular values above rel_tol times the largest one"""
    rel_tol = get_settings().rank_tol if rel_tol is None else rel_tol
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return 0
    sv = linalg.svdvals(M)
    if sv[0] == 0.0:
        return 0
    return int(np.sum(sv > rel_tol * sv[0]))


def solve_topology(system: TopologySystem, rel_tol: float | None = None) -> TopologySolveResult:
    """
    Least-squares solution of C x = y_tilde

    Full column rank gives the unique solution; otherwise the minimum-norm point
    is returned with feasible=False. Positivity and sum-to-one are reported, not
    imposed.
    """
    rel_tol = get_settings().rank_tol if rel_tol is None else rel_tol
    rank = numerical_rank(system.C, rel_tol)
    x_hat, *_ = linalg.lstsq(system.C, system.y_tilde, cond=rel_tol)
    feasible = rank == system.S
    if not feasible:
        logger.info("[topology] rank %d < S=%d, solution set has dimension %d",
                    rank, system.S, system.S - rank)
    return TopologySolveResult(
        x_hat=x_hat,
        numerical_rank=rank,
        feasible=feasible,
        residual=float(np.linalg.norm(system.C @ x_hat - system.y_tilde)),
        positivity_ok=bool(np.all(x_hat > 0)),
        sums_to_one=bool(abs(x_hat.sum() - 1.0) <= SUM_TOL),
        solution_set_dim=system.S - rank,
    )


def estimate_from_trajectory(traj: TrajectoryRecord, D: DivergenceMatrix | np.ndarray, iteration: int,
                             agents: Sequence[int] | None = None,
                             x_true: dict[int, np.ndarray] | None = None,
                             rel_tol: float | None = None) -> list[TopologyEstimate]:
    """
    Topology estimates from recorded intermediate beliefs

    Args:
        traj: Recorded trajectory holding log psi at `iteration`
        D: H x S divergence matrix of the sending components
        iteration: Recorded iteration i >= 1
        agents: 1-based receiving agents; every recorded agent when None
        x_true: Known aggregate weights per agent, carried into the estimates
        rel_tol: Rank tolerance

    Returns:
        One TopologyEstimate per agent
    """
    if iteration < 1:
        raise InvalidSpec("iteration must be >= 1")
    agents = list(agents) if agents is not None else list(traj.agents)
    x_true = x_true or {}
    estimates = []
    for agent in agents:
        y_hat = traj.agent_row(iteration, agent, "psi") / iteration
        theta_hat = int(np.argmax(y_hat)) + 1
        y_hat = y_hat.copy()
        y_hat[theta_hat - 1] = 0.0
        result = solve_topology(build_system(D, theta_hat, y_hat), rel_tol)
        truth = x_true.get(agent)
        estimates.append(
            TopologyEstimate(
                agent=agent,
                iteration=iteration,
                theta_star_hat=theta_hat,
                y_hat=y_hat,
                result=result,
                x_true=None if truth is None else np.asarray(truth, dtype=float),
            )
        )
    return estimates


def rank_profile(D: DivergenceMatrix | np.ndarray, rel_tol: float | None = None) -> list[int]:
    """rank C(theta) for theta = 1..H"""
    d = _values(D)
    return [numerical_rank(augmented_matrix(d, theta), rel_tol) for theta in range(1, d.shape[0] + 1)]


def feasibility_report(D: DivergenceMatrix | np.ndarray, rel_tol: float | None = None) -> FeasibilityReport:
    """Feasible iff H >= S and rank C(theta) = S for every theta"""
    d = _values(D)
    H, S = d.shape
    necessary = H >= S
    ranks = rank_profile(d, rel_tol)
    feasible = necessary and all(rank == S for rank in ranks)
    if not necessary:
        logger.info("[topology] H=%d < S=%d, topology learning is infeasible", H, S)
    return FeasibilityReport(H=H, S=S, necessary_condition=necessary, ranks=ranks, feasible=feasible)


def exhibit_ambiguity(system: TopologySystem, rel_tol: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """
    Two distinct strictly positive solutions of C x = y_tilde

    A linear program finds the solution maximizing its smallest entry t > 0;
    stepping t/2 along a unit null-space direction in both senses keeps every
    entry positive.
    """
    rel_tol = get_settings().rank_tol if rel_tol is None else rel_tol
    null = linalg.null_space(system.C, rcond=rel_tol)
    if null.shape[1] == 0:
        raise InconsistentData("the system has a unique solution")

    S = system.S
    # variables (x, t): maximize t subject to C x = y_tilde, t - x_i <= 0
    cost = np.zeros(S + 1)
    cost[-1] = -1.0
    A_ub = np.hstack([-np.eye(S), np.ones((S, 1))])
    A_eq = np.hstack([system.C, np.zeros((system.C.shape[0], 1))])
    outcome = linprog(
        cost,
        A_ub=A_ub,
        b_ub=np.zeros(S),
        A_eq=A_eq,
        b_eq=system.y_tilde,
        bounds=[(0.0, 1.0)] * S + [(None, 1.0)],
        method="highs",
    )
    if outcome.status != 0 or outcome.x[-1] <= 0:
        raise InconsistentData("no strictly positive point satisfies the system")

    x, t = outcome.x[:S], outcome.x[-1]
    direction = null[:, 0] / np.max(np.abs(null[:, 0]))
    return x + 0.5 * t * direction, x - 0.5 * t * direction
