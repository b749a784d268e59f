"""
Schemas untuk experiment configuration

One JSON document drives every command: graph parameters, agent models,
horizon, recording and inference settings, seed.
"""
from dataclasses import dataclass
from typing import Annotated, Literal, Union

from pydantic import BaseModel, Field, model_validator

from weakgraph.services.graph.schemas import GraphSpec
from weakgraph.services.learning.schemas import RecordSpec
from weakgraph.services.models.schemas import AgentModel, DivergenceMatrix


class CanonicalModels(BaseModel):
    """Means (-delta, 0, +delta); needs exactly two sending components"""
    family: Literal["canonical"] = "canonical"
    delta: float = Field(default=1.0, gt=0.0)
    receiving_truth_mean: float = Field(default=0.0, description="True mean of every receiving agent")


class StructuredGaussianModels(BaseModel):
    family: Literal["structured_gaussian"] = "structured_gaussian"
    means: list[float] = Field(..., min_length=2, description="Shared likelihood means m_1..m_H")
    assignment: list[float] = Field(..., description="True mean nu_s of each sending component")
    receiving_truth_mean: float | None = Field(default=None, description="Defaults to m_1")


class PerturbedGaussianModels(BaseModel):
    family: Literal["perturbed_gaussian"] = "perturbed_gaussian"
    H: int = Field(..., ge=2)
    variance: float = Field(..., ge=0.0, description="Variance of each offset")
    correlation: float = Field(..., description="Pairwise correlation of the offsets")
    truth_mean: float = Field(default=1.0, description="True mean of every sending agent")
    receiving_truth_mean: float = Field(default=1.0)


class BetaModels(BaseModel):
    family: Literal["beta"] = "beta"
    H: int = Field(..., ge=2)
    half_width: float = Field(..., ge=0.0, description="u ~ Uniform(-half_width, half_width)")
    receiving_truth_alpha: float = Field(default=2.0, gt=0.0)


class CustomModels(BaseModel):
    """Explicit models: one per sending component, one shared or one per receiving component"""
    family: Literal["custom"] = "custom"
    sending: list[AgentModel] = Field(..., min_length=1)
    receiving: list[AgentModel] = Field(..., min_length=1)


ModelSpec = Annotated[
    Union[CanonicalModels, StructuredGaussianModels, PerturbedGaussianModels, BetaModels, CustomModels],
    Field(discriminator="family"),
]


class InferenceSpec(BaseModel):
    at_iterations: list[int] = Field(..., min_length=1, description="Iterations to estimate x_k at")
    agents: list[int] | None = Field(default=None, description="1-based receiving agents; all when None")


class ExperimentConfig(BaseModel):
    name: str = Field(default="experiment")
    seed: int = Field(..., ge=0, description="Master seed")
    graph: GraphSpec
    models: ModelSpec
    T: int = Field(..., ge=1, description="Number of learning rounds")
    record: RecordSpec = Field(default_factory=RecordSpec)
    infer: InferenceSpec | None = None
    init: Literal["uniform", "random"] = "uniform"
    output_dir: str | None = Field(default=None, description="Overrides WEAKGRAPH_OUTPUT_DIR")

    @model_validator(mode="after")
    def _check_consistency(self) -> "ExperimentConfig":
        partition = self.graph.partition
        models = self.models
        if isinstance(models, CanonicalModels) and partition.S != 2:
            raise ValueError(f"canonical models need S=2 sending components, got S={partition.S}")
        if isinstance(models, StructuredGaussianModels) and len(models.assignment) != partition.S:
            raise ValueError(f"assignment must list S={partition.S} true means")
        if isinstance(models, CustomModels):
            if len(models.sending) != partition.S:
                raise ValueError(f"custom models must give S={partition.S} sending models")
            if len(models.receiving) not in (1, partition.R):
                raise ValueError(f"custom models must give 1 or R={partition.R} receiving models")
            H = {model.H for model in [*models.sending, *models.receiving]}
            if len(H) != 1:
                raise ValueError(f"every custom model must carry the same H, got {sorted(H)}")
        if self.record.agents is not None and any(not 1 <= a <= partition.N for a in self.record.agents):
            raise ValueError(f"recorded agents must lie in 1..{partition.N}")
        if self.infer is not None:
            if any(not 1 <= i <= self.T for i in self.infer.at_iterations):
                raise ValueError(f"inference iterations must lie in 1..T={self.T}")
            receiving = set(partition.receiving_labels())
            if self.infer.agents is not None and not set(self.infer.agents) <= receiving:
                raise ValueError("inference agents must be receiving agents")
        return self

    @property
    def H(self) -> int:
        models = self.models
        if isinstance(models, CanonicalModels):
            return 3
        if isinstance(models, StructuredGaussianModels):
            return len(models.means)
        if isinstance(models, CustomModels):
            return models.sending[0].H
        return models.H


@dataclass(frozen=True)
class ExperimentSeeds:
    graph: int
    sending_models: int
    receiving_models: int
    simulation: int


@dataclass(frozen=True)
class ExperimentModels:
    """Per-component sending models, per-agent models in agent order, and D"""
    sending: list[AgentModel]
    agents: list[AgentModel]
    D: DivergenceMatrix
