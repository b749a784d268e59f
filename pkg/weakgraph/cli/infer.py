"""
weakgraph infer: estimate the macroscopic topology from recorded beliefs
"""
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import pandas as pd

from weakgraph.cli.artifacts import (
    load_aggregate_weights,
    load_divergence_matrix,
    load_trajectory,
    output_dir,
)
from weakgraph.core.exceptions import InvalidSpec
from weakgraph.core.file_storage import (
    TOPOLOGY_REPORT_FILE,
    TOPOLOGY_SERIES_FILE,
    write_frame_atomic,
    write_json_atomic,
)
from weakgraph.services.experiment.schemas import ExperimentConfig
from weakgraph.services.topology import TopologyEstimate, estimate_from_trajectory

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InferResult:
    out: Path
    estimates: list[TopologyEstimate]

    @property
    def feasible(self) -> bool:
        return all(estimate.result.feasible for estimate in self.estimates)


def _series(estimates: list[TopologyEstimate]) -> pd.DataFrame:
    rows = []
    for estimate in estimates:
        for s, x_hat in enumerate(estimate.result.x_hat, start=1):
            rows.append(
                {
                    "iteration": estimate.iteration,
                    "agent": estimate.agent,
                    "component": s,
                    "x_hat": float(x_hat),
                    "x_true": float("nan") if estimate.x_true is None else float(estimate.x_true[s - 1]),
                }
            )
    return pd.DataFrame(rows, columns=["iteration", "agent", "component", "x_hat", "x_true"])


def cmd_infer(config: ExperimentConfig, at_iterations: Sequence[int] | None = None) -> InferResult:
    """
    Topology estimates for every receiving agent at each requested iteration

    Args:
        config: Experiment configuration
        at_iterations: Overrides config.infer.at_iterations

    Returns:
        InferResult; `feasible` is False when any system is rank deficient
    """
    if at_iterations is None:
        if config.infer is None:
            raise InvalidSpec("no inference iterations: set `infer.at_iterations` or pass --at")
        at_iterations = config.infer.at_iterations
    agents = config.infer.agents if config.infer is not None else None

    out = output_dir(config)
    D = load_divergence_matrix(out)
    x_true = load_aggregate_weights(out)
    traj = load_trajectory(out, seed=config.seed)
    if agents is None:
        agents = [agent for agent in traj.agents if agent in x_true]

    estimates: list[TopologyEstimate] = []
    for iteration in sorted(at_iterations):
        estimates.extend(estimate_from_trajectory(traj, D, iteration, agents, x_true))

    for estimate in estimates:
        if estimate.error is not None:
            logger.info("[infer] agent %d, i=%d: max |x_hat - x| = %.4g",
                        estimate.agent, estimate.iteration, estimate.error)

    write_json_atomic(out / TOPOLOGY_REPORT_FILE, [estimate.to_payload() for estimate in estimates])
    write_frame_atomic(out / TOPOLOGY_SERIES_FILE, _series(estimates))
    return InferResult(out=out, estimates=estimates)
