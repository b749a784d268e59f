"""
Schemas untuk topology inference
"""
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, Field


@dataclass(frozen=True)
class TopologySystem:
    """B_k anchored at theta_star, its all-ones augmentation C_k and y_tilde = [y_k; 1]"""
    B: np.ndarray
    C: np.ndarray
    y_tilde: np.ndarray
    theta_star: int

    @property
    def H(self) -> int:
        return self.B.shape[0]

    @property
    def S(self) -> int:
        return self.B.shape[1]


@dataclass(frozen=True)
class TopologySolveResult:
    x_hat: np.ndarray
    numerical_rank: int
    feasible: bool
    residual: float
    positivity_ok: bool
    sums_to_one: bool
    solution_set_dim: int

    def to_payload(self) -> dict:
        return {
            "x_hat": self.x_hat.tolist(),
            "rank": self.numerical_rank,
            "feasible": self.feasible,
            "residual": self.residual,
            "positivity_ok": self.positivity_ok,
            "sums_to_one": self.sums_to_one,
            "solution_set_dim": self.solution_set_dim,
        }


@dataclass(frozen=True)
class TopologyEstimate:
    """Estimate for one receiving agent at one recorded iteration"""
    agent: int
    iteration: int
    theta_star_hat: int
    y_hat: np.ndarray
    result: TopologySolveResult
    x_true: np.ndarray | None = None

    @property
    def error(self) -> float | None:
        if self.x_true is None:
            return None
        return float(np.max(np.abs(self.result.x_hat - self.x_true)))

    def to_payload(self) -> dict:
        return {
            "agent": self.agent,
            "iteration": self.iteration,
            "theta_star_hat": self.theta_star_hat,
            "x_hat": self.result.x_hat.tolist(),
            "x_true": None if self.x_true is None else self.x_true.tolist(),
            "rank": self.result.numerical_rank,
            "residual": self.result.residual,
            "feasible": self.result.feasible,
            "positivity_ok": self.result.positivity_ok,
            "solution_set_dim": self.result.solution_set_dim,
        }


class FeasibilityReport(BaseModel):
    H: int
    S: int
    necessary_condition: bool = Field(..., description="H >= S")
    ranks: list[int] = Field(..., description="rank of C(theta) for theta = 1..H")
    feasible: bool
