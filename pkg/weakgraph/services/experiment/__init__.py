from weakgraph.services.experiment.schemas import (
    BetaModels,
    CanonicalModels,
    CustomModels,
    ExperimentConfig,
    ExperimentModels,
    ExperimentSeeds,
    InferenceSpec,
    ModelSpec,
    PerturbedGaussianModels,
    StructuredGaussianModels,
)
from weakgraph.services.experiment.service import (
    apply_overrides,
    available_presets,
    build_models,
    derive_seeds,
    load_config,
    load_preset,
    replace_receiving_models,
    resolve_graph_spec,
    simulation_record_spec,
)

__all__ = [
    "BetaModels",
    "CanonicalModels",
    "CustomModels",
    "ExperimentConfig",
    "ExperimentModels",
    "ExperimentSeeds",
    "InferenceSpec",
    "ModelSpec",
    "PerturbedGaussianModels",
    "StructuredGaussianModels",
    "apply_overrides",
    "available_presets",
    "build_models",
    "derive_seeds",
    "load_config",
    "load_preset",
    "replace_receiving_models",
    "resolve_graph_spec",
    "simulation_record_spec",
]
