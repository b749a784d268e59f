"""
Experiment assembly: configs, presets, seeds and per-agent models
"""
import json
import logging
from importlib import resources
from pathlib import Path

from weakgraph.core.exceptions import InvalidSpec
from weakgraph.core.seeding import split_seed
from weakgraph.services.experiment.schemas import (
    BetaModels,
    CanonicalModels,
    CustomModels,
    ExperimentConfig,
    ExperimentModels,
    ExperimentSeeds,
    PerturbedGaussianModels,
    StructuredGaussianModels,
)
from weakgraph.services.graph.schemas import GraphSpec, NetworkPartition
from weakgraph.services.learning.schemas import RecordSpec
from weakgraph.services.models.divergence import canonical_D, divergence_matrix, structured_gaussian_D
from weakgraph.services.models.families import (
    beta_family,
    canonical_family,
    perturbed_gaussian_family,
    structured_gaussian_family,
)
from weakgraph.services.models.schemas import AgentModel, UnitVarianceGaussian

logger = logging.getLogger(__name__)

PRESET_PACKAGE = "weakgraph.services.experiment.presets"


def available_presets() -> list[str]:
    return sorted(
        entry.name.removesuffix(".json")
        for entry in resources.files(PRESET_PACKAGE).iterdir()
        if entry.name.endswith(".json")
    )


def _parse(text: str, source: str) -> ExperimentConfig:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidSpec(f"{source} is not valid JSON: {exc}") from exc
    return ExperimentConfig.model_validate(payload)


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    return _parse(path.read_text(encoding="utf-8"), str(path))


def load_preset(name: str) -> ExperimentConfig:
    if name not in available_presets():
        raise InvalidSpec(f"unknown preset {name!r}; available: {', '.join(available_presets())}")
    text = resources.files(PRESET_PACKAGE).joinpath(f"{name}.json").read_text(encoding="utf-8")
    return _parse(text, f"preset {name}")


def apply_overrides(config: ExperimentConfig, seed: int | None = None,
                    out: str | Path | None = None) -> ExperimentConfig:
    """Command-line --seed / --out take precedence over the document"""
    update: dict = {}
    if seed is not None:
        if seed < 0:
            raise InvalidSpec("seed must be nonnegative")
        update["seed"] = seed
    if out is not None:
        update["output_dir"] = str(out)
    return config.model_copy(update=update) if update else config


def derive_seeds(config: ExperimentConfig) -> ExperimentSeeds:
    graph, sending, receiving, simulation = split_seed(config.seed, 4)
    return ExperimentSeeds(graph=graph, sending_models=sending, receiving_models=receiving, simulation=simulation)


def resolve_graph_spec(config: ExperimentConfig, seeds: ExperimentSeeds | None = None) -> GraphSpec:
    """Graph spec with the seed filled in from the master seed when the document leaves it out"""
    if config.graph.seed is not None:
        return config.graph
    seeds = seeds or derive_seeds(config)
    return config.graph.model_copy(update={"seed": seeds.graph})


def simulation_record_spec(config: ExperimentConfig) -> RecordSpec:
    """Recording spec extended so every inference iteration keeps log psi"""
    record = config.record
    if config.infer is None:
        return record
    iterations = sorted(set(record.iterations) | set(config.infer.at_iterations))
    fields = record.fields if "psi" in record.fields else [*record.fields, "psi"]
    return record.model_copy(update={"iterations": iterations, "fields": fields})


def _spread(partition: NetworkPartition, sending: list[AgentModel],
            receiving: list[AgentModel]) -> list[AgentModel]:
    """
    Per-agent models in agent order

    Sending agents take their component's model. `receiving` holds one model
    per receiving agent, one per receiving component, or a single shared one.
    """
    agents: list[AgentModel] = []
    for block, model in zip(partition.sending_slices(), sending):
        agents.extend([model] * (block.stop - block.start))

    if len(receiving) == partition.n_receiving:
        agents.extend(receiving)
    elif len(receiving) == partition.R:
        for block, model in zip(partition.receiving_slices(), receiving):
            agents.extend([model] * (block.stop - block.start))
    elif len(receiving) == 1:
        agents.extend(receiving * partition.n_receiving)
    else:
        raise InvalidSpec(f"cannot spread {len(receiving)} receiving models over R={partition.R} components")
    return agents


def build_models(config: ExperimentConfig, seeds: ExperimentSeeds | None = None) -> ExperimentModels:
    """
    Sending models, per-agent models and the divergence matrix of an experiment

    Args:
        config: Validated experiment configuration
        seeds: Derived seeds; computed from config.seed when None

    Returns:
        ExperimentModels
    """
    seeds = seeds or derive_seeds(config)
    partition = config.graph.partition
    spec = config.models

    if isinstance(spec, CanonicalModels):
        sending, receiving_model = canonical_family(spec.delta, spec.receiving_truth_mean)
        receiving = [receiving_model]
        D = canonical_D(spec.delta)
    elif isinstance(spec, StructuredGaussianModels):
        D = structured_gaussian_D(spec.means, spec.assignment)
        sending = structured_gaussian_family(spec.means, spec.assignment)
        truth = spec.means[0] if spec.receiving_truth_mean is None else spec.receiving_truth_mean
        receiving = [
            AgentModel(
                truth=UnitVarianceGaussian(mean=truth),
                likelihoods=tuple(UnitVarianceGaussian(mean=m) for m in spec.means),
            )
        ]
    elif isinstance(spec, PerturbedGaussianModels):
        sending = perturbed_gaussian_family(
            spec.H, partition.S, spec.variance, spec.correlation, seeds.sending_models, spec.truth_mean
        )
        receiving = perturbed_gaussian_family(
            spec.H, partition.n_receiving, spec.variance, spec.correlation,
            seeds.receiving_models, spec.receiving_truth_mean,
        )
        D = divergence_matrix(sending)
    elif isinstance(spec, BetaModels):
        sending = beta_family(spec.H, partition.S, spec.half_width, seeds.sending_models)
        receiving = beta_family(
            spec.H, partition.n_receiving, spec.half_width, seeds.receiving_models,
            truth_alpha=spec.receiving_truth_alpha,
        )
        D = divergence_matrix(sending)
    elif isinstance(spec, CustomModels):
        sending = list(spec.sending)
        receiving = list(spec.receiving)
        D = divergence_matrix(sending)
    else:
        raise InvalidSpec(f"unsupported model family {spec!r}")

    logger.info("[experiment] %s: %s models, D is %dx%d", config.name, spec.family, D.H, D.S)
    return ExperimentModels(sending=sending, agents=_spread(partition, sending, receiving), D=D)


def replace_receiving_models(models: ExperimentModels, partition: NetworkPartition,
                             receiving: list[AgentModel]) -> ExperimentModels:
    """Same sending side, different receiving agents' models"""
    return ExperimentModels(
        sending=models.sending,
        agents=_spread(partition, models.sending, receiving),
        D=models.D,
    )
