from weakgraph.services.topology.schemas import (
    FeasibilityReport,
    TopologyEstimate,
    TopologySolveResult,
    TopologySystem,
)
from weakgraph.services.topology.service import (
    anchored_differences,
    augmented_matrix,
    build_system,
    estimate_from_trajectory,
    exhibit_ambiguity,
    feasibility_report,
    numerical_rank,
    rank_profile,
    solve_topology,
)
from weakgraph.services.topology.theory import (
    anchoring_operator,
    edm,
    lemma2_projection,
    range_contains_ones,
    v3_certificate,
)

__all__ = [
    "FeasibilityReport",
    "TopologyEstimate",
    "TopologySolveResult",
    "TopologySystem",
    "anchored_differences",
    "anchoring_operator",
    "augmented_matrix",
    "build_system",
    "edm",
    "estimate_from_trajectory",
    "exhibit_ambiguity",
    "feasibility_report",
    "lemma2_projection",
    "numerical_rank",
    "range_contains_ones",
    "rank_profile",
    "solve_topology",
    "v3_certificate",
]
