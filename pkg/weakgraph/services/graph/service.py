"""
Weak graph construction and structural validation

Generator (averaging rule with self-loops inside every component):
- sending components: Erdos-Renyi G(n, q), must be connected
- send -> receive edges: Bernoulli(pi_s), initial weight 1/d_k
- receiving components: Erdos-Renyi G(n, q) (or complete), must be connected
- every column renormalized last so A is left-stochastic
"""
import logging

import networkx as nx
import numpy as np
from pydantic import ValidationError

from weakgraph.core.config import get_settings
from weakgraph.core.exceptions import InvalidSpec, RetryExhausted, StructureViolation
from weakgraph.services.graph.schemas import (
    BlockDecomposition,
    CombinationMatrix,
    GraphSpec,
)

logger = logging.getLogger(__name__)

COLUMN_SUM_TOL = 1e-12


def _coerce_spec(spec: GraphSpec | dict) -> GraphSpec:
    if isinstance(spec, GraphSpec):
        return spec
    try:
        return GraphSpec.model_validate(spec)
    except ValidationError as exc:
        raise InvalidSpec(f"Invalid graph spec: {exc}") from exc


def _averaging_weights(graph: nx.Graph) -> np.ndarray:
    """a_{lk} = 1/n_k over the closed neighborhood of k (self included)"""
    n = graph.number_of_nodes()
    adjacency = nx.to_numpy_array(graph, nodelist=range(n)) + np.eye(n)
    return adjacency / adjacency.sum(axis=0, keepdims=True)


def _component_graph(size: int, q: float, rng: np.random.Generator, complete: bool = False) -> nx.Graph:
    if complete:
        return nx.complete_graph(size)
    return nx.gnp_random_graph(size, q, seed=int(rng.integers(2**31 - 1)))


def _draw_once(spec: GraphSpec, rng: np.random.Generator) -> tuple[np.ndarray | None, str]:
    """One candidate draw; returns (entries, "") or (None, rejection reason)"""
    partition = spec.partition
    A = np.zeros((partition.N, partition.N))
    sending = partition.sending_slices()
    n_s = partition.n_sending

    for s, block in enumerate(sending, start=1):
        graph = _component_graph(block.stop - block.start, spec.er_prob, rng)
        if not nx.is_connected(graph):
            return None, f"sending component {s} is not strongly connected"
        A[block, block] = _averaging_weights(graph)

    complete = spec.receiving_topology == "complete"
    for r, block in enumerate(partition.receiving_slices(), start=1):
        size = block.stop - block.start
        graph = _component_graph(size, spec.er_prob, rng, complete=complete)
        if not nx.is_connected(graph):
            return None, f"receiving component {r} is not connected"

        incoming = np.zeros((n_s, size))
        for s, sblock in enumerate(sending, start=1):
            edges = rng.random((sblock.stop - sblock.start, size)) < spec.send_recv_probs[s - 1]
            if not edges.any():
                return None, f"receiving component {r} has no edge from sending component {s}"
            incoming[sblock, :] = edges

        d = incoming.sum(axis=0)
        reached = d > 0
        incoming[:, reached] /= d[reached]
        A[:n_s, block] = incoming
        A[block, block] = _averaging_weights(graph)

    return A / A.sum(axis=0, keepdims=True), ""


def _from_explicit(spec: GraphSpec) -> CombinationMatrix:
    entries = np.asarray(spec.explicit_weights, dtype=float)
    if np.any(entries < 0) or not np.all(np.isfinite(entries)):
        raise StructureViolation("explicit weights must be finite and nonnegative")
    sums = entries.sum(axis=0)
    if np.any(sums <= 0):
        raise StructureViolation("every column of the explicit weights needs a positive entry")
    matrix = CombinationMatrix(entries=entries / sums, partition=spec.partition)
    validate_structure(matrix)
    return matrix


def build_weak_graph(spec: GraphSpec | dict, max_retries: int | None = None) -> CombinationMatrix:
    """
    Draw a weak graph satisfying every structural invariant

    Args:
        spec: Graph parameters (a dict is validated into GraphSpec)
        max_retries: Resample cap; spec.max_retries then settings apply when None

    Returns:
        Validated CombinationMatrix
    """
    spec = _coerce_spec(spec)
    if spec.explicit_weights is not None:
        return _from_explicit(spec)

    cap = max_retries or spec.max_retries or get_settings().max_retries
    rng = np.random.default_rng(spec.seed)
    reason = "no attempt made"
    for attempt in range(1, cap + 1):
        entries, reason = _draw_once(spec, rng)
        if entries is None:
            logger.debug("[graph] attempt %d rejected: %s", attempt, reason)
            continue
        matrix = CombinationMatrix(entries=entries, partition=spec.partition)
        validate_structure(matrix)
        logger.info("[graph] accepted draw after %d attempt(s), N=%d", attempt, matrix.N)
        return matrix

    raise RetryExhausted(cap, reason)


def validate_structure(matrix: CombinationMatrix, tol: float = COLUMN_SUM_TOL) -> None:
    """Raise StructureViolation unless every CombinationMatrix invariant holds"""
    A = matrix.entries
    partition = matrix.partition
    N = partition.N
    if A.shape != (N, N):
        raise StructureViolation(f"matrix shape {A.shape} does not match N={N}")
    if not np.all(np.isfinite(A)) or np.any(A < 0):
        raise StructureViolation("weights must be finite and nonnegative")

    column_error = np.max(np.abs(A.sum(axis=0) - 1.0))
    if column_error > tol:
        raise StructureViolation(f"matrix is not left-stochastic (max column error {column_error:.3e})")

    n_s = partition.n_sending
    feeding = np.argwhere(A[n_s:, :n_s] != 0)
    if feeding.size:
        source, target = feeding[0, 0] + n_s + 1, feeding[0, 1] + 1
        raise StructureViolation(
            f"receiving agent {source} (component {partition.component_of(source)}) feeds "
            f"sending agent {target} (component {partition.component_of(target)})"
        )

    sending = partition.sending_slices()
    own = np.zeros((n_s, n_s), dtype=bool)
    for block in sending:
        own[block, block] = True
    if np.any(A[:n_s, :n_s][~own] != 0):
        raise StructureViolation("sending components communicate with each other")

    for s, block in enumerate(sending, start=1):
        sub = A[block, block]
        digraph = nx.from_numpy_array(sub, create_using=nx.DiGraph)
        if not nx.is_strongly_connected(digraph):
            raise StructureViolation(f"sending component {s} is not strongly connected")
        if not np.any(np.diag(sub) > 0):
            raise StructureViolation(f"sending component {s} has no self-loop")

    for r, block in enumerate(partition.receiving_slices(), start=1):
        for s, sblock in enumerate(sending, start=1):
            if not np.any(A[sblock, block] > 0):
                raise StructureViolation(f"receiving component {r} has no edge from sending component {s}")


def block_decompose(matrix: CombinationMatrix) -> BlockDecomposition:
    """Split A into [[A_S, A_SR], [0, A_R]]"""
    A = matrix.entries
    n_s = matrix.partition.n_sending
    lower_left = A[n_s:, :n_s]
    if np.any(lower_left != 0):
        worst = float(np.max(np.abs(lower_left)))
        raise StructureViolation(f"receiving->sending block is not zero (max entry {worst:.3e})")
    return BlockDecomposition(
        A_S=A[:n_s, :n_s].copy(),
        A_SR=A[:n_s, n_s:].copy(),
        A_R=A[n_s:, n_s:].copy(),
    )
