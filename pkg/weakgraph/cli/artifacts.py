"""
Artifact readers and writers shared by the commands
"""
from pathlib import Path

import numpy as np
import pandas as pd

from weakgraph.core.file_storage import (
    AGGREGATE_FILE,
    DIVERGENCE_FILE,
    GRAPH_FILE,
    TRAJECTORY_FILE,
    read_frame,
    read_json,
    resolve_output_dir,
    write_frame_atomic,
)
from weakgraph.services.experiment.schemas import ExperimentConfig
from weakgraph.services.graph.schemas import AggregateWeights, CombinationMatrix
from weakgraph.services.learning.schemas import TrajectoryRecord
from weakgraph.services.models.schemas import DivergenceMatrix


def output_dir(config: ExperimentConfig) -> Path:
    return resolve_output_dir(config.output_dir)


def matrix_frame(values: np.ndarray, rows: list[int], columns: list[int]) -> pd.DataFrame:
    return pd.DataFrame(values, index=pd.Index(rows, name="agent"), columns=[str(c) for c in columns])


def write_matrix(path: Path, values: np.ndarray, rows: list[int], columns: list[int], header: str) -> Path:
    return write_frame_atomic(path, matrix_frame(values, rows, columns), header_comment=header, index=True)


def aggregate_frame(weights: AggregateWeights) -> pd.DataFrame:
    """Long format: agent, component, x"""
    S = weights.x.shape[0]
    return pd.DataFrame(
        {
            "agent": np.repeat(weights.receiving_labels, S),
            "component": np.tile(np.arange(1, S + 1), len(weights.receiving_labels)),
            "x": weights.x.T.ravel(),
        }
    )


def load_graph(out: Path) -> CombinationMatrix:
    return CombinationMatrix.from_payload(read_json(out / GRAPH_FILE, "generate"))


def load_aggregate_weights(out: Path) -> dict[int, np.ndarray]:
    frame = read_frame(out / AGGREGATE_FILE, "generate")
    return {
        int(agent): group.sort_values("component")["x"].to_numpy(dtype=float)
        for agent, group in frame.groupby("agent", sort=True)
    }


def load_divergence_matrix(out: Path) -> DivergenceMatrix:
    return DivergenceMatrix.from_frame(read_frame(out / DIVERGENCE_FILE, "generate"))


def load_trajectory(out: Path, seed: int = 0) -> TrajectoryRecord:
    return TrajectoryRecord.from_frame(read_frame(out / TRAJECTORY_FILE, "simulate"), seed=seed)
