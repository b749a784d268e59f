from weakgraph.services.analysis.schemas import AnalysisReport, NetworkDivergence, Region
from weakgraph.services.analysis.service import (
    analyze,
    analyze_heterogeneous,
    canonical_thresholds,
    is_canonical,
    limiting_hypothesis,
    network_divergence,
    network_divergence_general,
    predicted_rates,
)

__all__ = [
    "AnalysisReport",
    "NetworkDivergence",
    "Region",
    "analyze",
    "analyze_heterogeneous",
    "canonical_thresholds",
    "is_canonical",
    "limiting_hypothesis",
    "network_divergence",
    "network_divergence_general",
    "predicted_rates",
]
