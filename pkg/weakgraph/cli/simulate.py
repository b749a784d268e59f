"""
weakgraph simulate: run the learning engine on the generated graph
"""
import logging

from weakgraph.cli.artifacts import load_graph, output_dir
from weakgraph.core.exceptions import DimensionMismatch
from weakgraph.core.file_storage import TRAJECTORY_FILE, write_frame_atomic
from weakgraph.services.experiment import build_models, derive_seeds, simulation_record_spec
from weakgraph.services.experiment.schemas import ExperimentConfig
from weakgraph.services.learning import TrajectoryRecord, run

logger = logging.getLogger(__name__)


def cmd_simulate(config: ExperimentConfig) -> TrajectoryRecord:
    out = output_dir(config)
    graph = load_graph(out)
    if graph.partition != config.graph.partition:
        raise DimensionMismatch(
            f"graph on disk has {graph.partition.describe()}, config has {config.graph.partition.describe()}; "
            "rerun `weakgraph generate`"
        )
    seeds = derive_seeds(config)
    models = build_models(config, seeds)
    traj = run(graph, models.agents, config.T, seeds.simulation, simulation_record_spec(config), config.init)
    if traj.floor_hits:
        logger.warning("[simulate] %d log-belief entries were clamped", traj.floor_hits)
    write_frame_atomic(out / TRAJECTORY_FILE, traj.to_frame())
    return traj
