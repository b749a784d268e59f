"""
weakgraph generate: draw the graph, compute its limits and the analytical predictions
"""
import logging
from dataclasses import dataclass
from pathlib import Path

from weakgraph.cli.artifacts import aggregate_frame, output_dir, write_matrix
from weakgraph.core.file_storage import (
    AGGREGATE_FILE,
    ANALYSIS_FILE,
    DIVERGENCE_FILE,
    GRAPH_FILE,
    MATRIX_FILE,
    OMEGA_FILE,
    W_FILE,
    write_frame_atomic,
    write_json_atomic,
)
from weakgraph.services.analysis import AnalysisReport, analyze
from weakgraph.services.experiment import build_models, derive_seeds, resolve_graph_spec
from weakgraph.services.experiment.schemas import ExperimentConfig
from weakgraph.services.graph import (
    AggregateWeights,
    CombinationMatrix,
    LimitingMatrices,
    aggregate_weights,
    build_weak_graph,
    limiting_matrices,
    matrix_power_gap,
)

logger = logging.getLogger(__name__)

LIMIT_CHECK_POWER = 1000


@dataclass(frozen=True)
class GenerateResult:
    out: Path
    matrix: CombinationMatrix
    limits: LimitingMatrices
    weights: AggregateWeights
    report: AnalysisReport


def cmd_generate(config: ExperimentConfig) -> GenerateResult:
    out = output_dir(config)
    seeds = derive_seeds(config)
    matrix = build_weak_graph(resolve_graph_spec(config, seeds))
    partition = matrix.partition
    limits = limiting_matrices(matrix)
    weights = aggregate_weights(limits, partition)
    models = build_models(config, seeds)
    report = analyze(models.D, weights)

    header = partition.describe()
    agents = list(range(1, partition.N + 1))
    sending = agents[: partition.n_sending]
    receiving = partition.receiving_labels()

    write_json_atomic(out / GRAPH_FILE, matrix.to_payload())
    write_matrix(out / MATRIX_FILE, matrix.entries, agents, agents, header)
    write_matrix(out / OMEGA_FILE, limits.Omega, sending, receiving, header)
    write_matrix(out / W_FILE, limits.W, sending, receiving, header)
    write_frame_atomic(out / AGGREGATE_FILE, aggregate_frame(weights))
    write_frame_atomic(out / DIVERGENCE_FILE, models.D.to_frame())
    write_json_atomic(out / ANALYSIS_FILE, report.model_dump())

    logger.info("[generate] spectral radius of A_R = %.6f", limits.spectral_radius_R)
    logger.info("[generate] max |A^%d - A_inf| = %.3e", LIMIT_CHECK_POWER,
                matrix_power_gap(matrix, LIMIT_CHECK_POWER, limits))
    return GenerateResult(out=out, matrix=matrix, limits=limits, weights=weights, report=report)
