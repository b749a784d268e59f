from functools import lru_cache
import os

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field

# Load .env early so every WEAKGRAPH_* variable is visible to Settings defaults
load_dotenv()


def _env(name: str, default: str):
    return lambda: os.getenv(name, default)


class Settings(BaseModel):
    # env values arrive as strings; validate_default coerces them
    model_config = ConfigDict(validate_default=True)

    output_dir: str = Field(default_factory=_env("WEAKGRAPH_OUTPUT_DIR", "artifacts"))
    log_level: str = Field(default_factory=_env("WEAKGRAPH_LOG_LEVEL", "INFO"))

    # Graph generation
    max_retries: int = Field(default_factory=_env("WEAKGRAPH_MAX_RETRIES", "1000"))
    condition_limit: float = Field(default_factory=_env("WEAKGRAPH_CONDITION_LIMIT", "1e12"))
    perron_tol: float = Field(default_factory=_env("WEAKGRAPH_PERRON_TOL", "1e-13"))
    perron_max_iter: int = Field(default_factory=_env("WEAKGRAPH_PERRON_MAX_ITER", "100000"))

    # Divergences & beliefs
    quad_tol: float = Field(default_factory=_env("WEAKGRAPH_QUAD_TOL", "1e-8"))
    log_floor: float = Field(default_factory=_env("WEAKGRAPH_LOG_FLOOR", "-1e6"))
    mc_samples: int = Field(default_factory=_env("WEAKGRAPH_MC_SAMPLES", "1000000"))
    mc_seed: int = Field(default_factory=_env("WEAKGRAPH_MC_SEED", "0"))

    # Analysis & topology
    tie_tol: float = Field(default_factory=_env("WEAKGRAPH_TIE_TOL", "1e-12"))
    rank_tol: float = Field(default_factory=_env("WEAKGRAPH_RANK_TOL", "1e-10"))


@lru_cache
def get_settings() -> Settings:
    return Settings()
