"""Weak graph services package"""
from weakgraph.services.graph.limits import (
    aggregate_weights,
    limiting_matrices,
    matrix_power_gap,
    perron_eigenvector,
)
from weakgraph.services.graph.schemas import (
    AggregateWeights,
    BlockDecomposition,
    CombinationMatrix,
    GraphSpec,
    LimitingMatrices,
    NetworkPartition,
)
from weakgraph.services.graph.service import block_decompose, build_weak_graph, validate_structure

__all__ = [
    "AggregateWeights",
    "BlockDecomposition",
    "CombinationMatrix",
    "GraphSpec",
    "LimitingMatrices",
    "NetworkPartition",
    "aggregate_weights",
    "block_decompose",
    "build_weak_graph",
    "limiting_matrices",
    "matrix_power_gap",
    "perron_eigenvector",
    "validate_structure",
]
