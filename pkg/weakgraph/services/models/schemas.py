"""
Schemas untuk agent statistical models

Descriptors are immutable; perturbation draws live on the stored AgentModel.
"""
import math
from dataclasses import dataclass
from typing import Annotated, Literal, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import stats

from weakgraph.core.exceptions import InconsistentData

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
# Gaussian mass beyond +-40 standard deviations is below double precision
GAUSSIAN_QUAD_HALF_WIDTH = 40.0

Provenance = Literal["analytic", "quadrature", "monte-carlo"]


class HypothesisSet(BaseModel):
    model_config = ConfigDict(frozen=True)

    H: int = Field(..., ge=2, description="Number of hypotheses")

    def labels(self) -> list[int]:
        return list(range(1, self.H + 1))


class UnitVarianceGaussian(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["gaussian"] = "gaussian"
    mean: float

    def log_pdf(self, xi):
        return -LOG_SQRT_2PI - 0.5 * (np.asarray(xi, dtype=float) - self.mean) ** 2

    def sample(self, rng: np.random.Generator, size=None):
        return rng.normal(self.mean, 1.0, size=size)

    def in_support(self, xi) -> bool:
        return bool(np.all(np.isfinite(xi)))

    def quad_bounds(self) -> tuple[float, float]:
        return self.mean - GAUSSIAN_QUAD_HALF_WIDTH, self.mean + GAUSSIAN_QUAD_HALF_WIDTH


class BetaDistribution(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["beta"] = "beta"
    alpha: float = Field(..., gt=0)
    beta: float = Field(..., gt=0)

    def log_pdf(self, xi):
        return stats.beta.logpdf(xi, self.alpha, self.beta)

    def sample(self, rng: np.random.Generator, size=None):
        return rng.beta(self.alpha, self.beta, size=size)

    def in_support(self, xi) -> bool:
        xi = np.asarray(xi, dtype=float)
        return bool(np.all((xi > 0.0) & (xi < 1.0)))

    def quad_bounds(self) -> tuple[float, float]:
        return 0.0, 1.0


Distribution = Annotated[Union[UnitVarianceGaussian, BetaDistribution], Field(discriminator="kind")]


class AgentModel(BaseModel):
    """True data distribution f_k plus likelihoods L_k(.|theta), theta = 1..H"""
    model_config = ConfigDict(frozen=True)

    truth: Distribution
    likelihoods: tuple[Distribution, ...] = Field(..., min_length=2)
    offsets: tuple[float, ...] | None = Field(
        default=None, description="Per-hypothesis perturbation draws used to build the likelihoods"
    )

    @model_validator(mode="after")
    def _check_support(self) -> "AgentModel":
        # a Gaussian truth has unbounded support; a Beta likelihood would give infinite KL
        if self.truth.kind == "gaussian" and any(lik.kind == "beta" for lik in self.likelihoods):
            raise ValueError("every likelihood must be positive on the support of the truth")
        if self.offsets is not None and len(self.offsets) != len(self.likelihoods):
            raise ValueError("offsets must have one entry per hypothesis")
        return self

    @property
    def H(self) -> int:
        return len(self.likelihoods)

    def sample(self, rng: np.random.Generator, size=None):
        return self.truth.sample(rng, size=size)

    def log_likelihoods(self, xi: float) -> np.ndarray:
        return np.array([float(lik.log_pdf(xi)) for lik in self.likelihoods])


@dataclass(frozen=True)
class DivergenceMatrix:
    """d[theta, s] = KL(f^(s) || L^(s)(theta)); rows are hypotheses, columns components"""
    values: np.ndarray
    provenance: tuple[tuple[str, ...], ...]

    @property
    def H(self) -> int:
        return self.values.shape[0]

    @property
    def hypotheses(self) -> HypothesisSet:
        return HypothesisSet(H=self.H)

    @property
    def S(self) -> int:
        return self.values.shape[1]

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {
                "theta": theta,
                "component": s + 1,
                "divergence": float(self.values[theta - 1, s]),
                "provenance": self.provenance[theta - 1][s],
            }
            for theta in self.hypotheses.labels()
            for s in range(self.S)
        ]
        return pd.DataFrame(rows, columns=["theta", "component", "divergence", "provenance"])

    @classmethod
    def from_frame(cls, frame: pd.DataFrame) -> "DivergenceMatrix":
        H, S = int(frame["theta"].max()), int(frame["component"].max())
        values = np.full((H, S), np.nan)
        provenance = [["analytic"] * S for _ in range(H)]
        for row in frame.itertuples(index=False):
            values[row.theta - 1, row.component - 1] = row.divergence
            provenance[row.theta - 1][row.component - 1] = row.provenance
        if np.any(np.isnan(values)):
            raise InconsistentData("divergence table does not cover every (theta, component) pair")
        return cls(values=values, provenance=tuple(tuple(r) for r in provenance))

    @classmethod
    def analytic(cls, values: np.ndarray) -> "DivergenceMatrix":
        values = np.asarray(values, dtype=float)
        provenance = tuple(tuple("analytic" for _ in range(values.shape[1])) for _ in range(values.shape[0]))
        return cls(values=values, provenance=provenance)
