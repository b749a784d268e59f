"""
Limiting topological objects of a weak graph

A^i -> [[E, E W], [0, 0]] with E = blockdiag(p^(s) 1^T) and
W = A_SR (I - A_R)^{-1}; Omega = E W, x_{sk} = sum over component s of omega_{lk}.
"""
import logging

import numpy as np
from scipy import linalg

from weakgraph.core.config import get_settings
from weakgraph.core.exceptions import NoConvergence, NumericalError, SingularSystem
from weakgraph.services.graph.schemas import AggregateWeights, CombinationMatrix, LimitingMatrices
from weakgraph.services.graph.service import block_decompose

logger = logging.getLogger(__name__)

OMEGA_COLUMN_TOL = 1e-10
AGGREGATE_AGREEMENT_TOL = 1e-10


def perron_eigenvector(block: np.ndarray, tol: float | None = None, max_iter: int | None = None) -> np.ndarray:
    """
    Perron vector of a primitive left-stochastic block by power iteration

    Args:
        block: Square combination matrix of one sending component
        tol: Stop once max|A p - p| <= tol
        max_iter: Iteration budget

    Returns:
        Positive vector summing to 1 with A p = p
    """
    settings = get_settings()
    tol = settings.perron_tol if tol is None else tol
    max_iter = settings.perron_max_iter if max_iter is None else max_iter

    A = np.asarray(block, dtype=float)
    p = np.full(A.shape[0], 1.0 / A.shape[0])
    for _ in range(max_iter):
        nxt = A @ p
        if np.max(np.abs(nxt - p)) <= tol:
            return p
        p = nxt / nxt.sum()

    raise NoConvergence(
        f"power iteration did not reach tol={tol:g} in {max_iter} iterations (block not primitive?)"
    )


def limiting_matrices(matrix: CombinationMatrix, condition_limit: float | None = None) -> LimitingMatrices:
    """Compute Perron vectors, E, W and Omega for a valid weak graph"""
    condition_limit = get_settings().condition_limit if condition_limit is None else condition_limit
    blocks = block_decompose(matrix)
    n_s = matrix.partition.n_sending

    perron = [
        perron_eigenvector(matrix.entries[block, block])
        for block in matrix.partition.sending_slices()
    ]
    E = linalg.block_diag(*[np.outer(p, np.ones_like(p)) for p in perron])

    I_minus = np.eye(blocks.A_R.shape[0]) - blocks.A_R
    condition = np.linalg.cond(I_minus)
    if not np.isfinite(condition) or condition > condition_limit:
        raise SingularSystem(
            f"(I - A_R) has condition number {condition:.3e}; "
            "some receiving agent has no path to any sending agent"
        )
    # W (I - A_R) = A_SR  <=>  (I - A_R)^T W^T = A_SR^T
    W = linalg.solve(I_minus.T, blocks.A_SR.T).T
    Omega = E @ W

    column_error = float(np.max(np.abs(Omega.sum(axis=0) - 1.0)))
    if column_error > OMEGA_COLUMN_TOL:
        raise NumericalError(f"Omega columns do not sum to 1 (max error {column_error:.3e})")

    radius = float(np.max(np.abs(np.linalg.eigvals(blocks.A_R))))
    logger.debug("[limits] n_s=%d rho(A_R)=%.6f cond=%.3e", n_s, radius, condition)
    return LimitingMatrices(E=E, W=W, Omega=Omega, perron=perron, spectral_radius_R=radius)


def aggregate_weights(lim: LimitingMatrices, partition) -> AggregateWeights:
    """x_{sk} from Omega, cross-checked against the same sums over W"""
    from_omega = np.vstack([lim.Omega[block].sum(axis=0) for block in partition.sending_slices()])
    from_w = np.vstack([lim.W[block].sum(axis=0) for block in partition.sending_slices()])
    gap = float(np.max(np.abs(from_omega - from_w)))
    if gap > AGGREGATE_AGREEMENT_TOL:
        raise NumericalError(f"aggregate weights from Omega and W disagree by {gap:.3e}")
    return AggregateWeights(x=from_omega, receiving_labels=partition.receiving_labels())


def matrix_power_gap(matrix: CombinationMatrix, i: int, lim: LimitingMatrices | None = None) -> float:
    """max |A^i - A_inf|"""
    lim = lim or limiting_matrices(matrix)
    return float(np.max(np.abs(np.linalg.matrix_power(matrix.entries, i) - lim.A_inf())))
