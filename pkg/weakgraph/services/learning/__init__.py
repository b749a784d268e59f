"""Social learning services package"""
from weakgraph.services.learning.engine import (
    LikelihoodBank,
    ObservationSource,
    adapt,
    bayes_update,
    combine,
    combine_all,
    init_beliefs,
    run,
    step,
)
from weakgraph.services.learning.schemas import BeliefState, RecordSpec, TrajectoryRecord

__all__ = [
    "BeliefState",
    "LikelihoodBank",
    "ObservationSource",
    "RecordSpec",
    "TrajectoryRecord",
    "adapt",
    "bayes_update",
    "combine",
    "combine_all",
    "init_beliefs",
    "run",
    "step",
]
