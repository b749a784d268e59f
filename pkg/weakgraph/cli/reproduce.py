"""
weakgraph reproduce: generate, simulate, infer (when configured) and feasibility in one go
"""
from dataclasses import dataclass

from weakgraph.cli.feasibility import cmd_feasibility
from weakgraph.cli.generate import GenerateResult, cmd_generate
from weakgraph.cli.infer import InferResult, cmd_infer
from weakgraph.cli.simulate import cmd_simulate
from weakgraph.services.experiment.schemas import ExperimentConfig
from weakgraph.services.learning import TrajectoryRecord
from weakgraph.services.topology import FeasibilityReport


@dataclass(frozen=True)
class ReproduceResult:
    generated: GenerateResult
    trajectory: TrajectoryRecord
    inference: InferResult | None
    feasibility: FeasibilityReport

    @property
    def feasible(self) -> bool:
        if self.inference is not None and not self.inference.feasible:
            return False
        return self.feasibility.feasible


def cmd_reproduce(config: ExperimentConfig) -> ReproduceResult:
    generated = cmd_generate(config)
    trajectory = cmd_simulate(config)
    inference = cmd_infer(config) if config.infer is not None else None
    return ReproduceResult(
        generated=generated,
        trajectory=trajectory,
        inference=inference,
        feasibility=cmd_feasibility(config),
    )
