"""
weakgraph feasibility: rank analysis of the divergence matrix
"""
from weakgraph.cli.artifacts import output_dir
from weakgraph.core.file_storage import FEASIBILITY_FILE, write_json_atomic
from weakgraph.services.experiment import build_models
from weakgraph.services.experiment.schemas import ExperimentConfig
from weakgraph.services.topology import FeasibilityReport, feasibility_report


def cmd_feasibility(config: ExperimentConfig) -> FeasibilityReport:
    report = feasibility_report(build_models(config).D)
    write_json_atomic(output_dir(config) / FEASIBILITY_FILE, report.model_dump())
    return report
