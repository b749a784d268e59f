"""
Schemas untuk weak graph service
"""
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, model_validator


class NetworkPartition(BaseModel):
    """Component sizes, sending components first"""
    S: int = Field(..., ge=1, description="Number of sending components")
    R: int = Field(..., ge=1, description="Number of receiving components")
    sizes: list[int] = Field(..., description="Component sizes N_1..N_{S+R}")

    @model_validator(mode="after")
    def _check_sizes(self) -> "NetworkPartition":
        if len(self.sizes) != self.S + self.R:
            raise ValueError(f"sizes must list S+R={self.S + self.R} components, got {len(self.sizes)}")
        if any(n < 1 for n in self.sizes):
            raise ValueError("every component size must be >= 1")
        return self

    @property
    def N(self) -> int:
        return sum(self.sizes)

    @property
    def n_sending(self) -> int:
        return sum(self.sizes[: self.S])

    @property
    def n_receiving(self) -> int:
        return sum(self.sizes[self.S:])

    def component_slices(self) -> list[slice]:
        """0-based agent slices of every component, in order"""
        slices, start = [], 0
        for size in self.sizes:
            slices.append(slice(start, start + size))
            start += size
        return slices

    def sending_slices(self) -> list[slice]:
        return self.component_slices()[: self.S]

    def receiving_slices(self) -> list[slice]:
        return self.component_slices()[self.S:]

    def receiving_labels(self) -> list[int]:
        """1-based labels of the receiving agents"""
        return list(range(self.n_sending + 1, self.N + 1))

    def component_of(self, agent: int) -> int:
        """1-based component of a 1-based agent label"""
        for component, block in enumerate(self.component_slices(), start=1):
            if block.start < agent <= block.stop:
                return component
        raise IndexError(f"agent {agent} outside 1..{self.N}")

    def describe(self) -> str:
        return f"S={self.S} R={self.R} sizes={','.join(str(n) for n in self.sizes)}"


class GraphSpec(BaseModel):
    """Parameters of the random weak-graph generator"""
    partition: NetworkPartition
    er_prob: float = Field(default=0.7, gt=0.0, le=1.0, description="Erdos-Renyi probability q")
    send_recv_probs: list[float] = Field(..., description="Send-to-receive probabilities pi_1..pi_S")
    receiving_topology: Literal["erdos_renyi", "complete"] = Field(
        default="erdos_renyi", description="Wiring inside each receiving component"
    )
    explicit_weights: list[list[float]] | None = Field(
        default=None, description="Full N x N weight override; columns are renormalized"
    )
    seed: int | None = Field(default=None, description="Generator seed (falls back to the experiment seed)")
    max_retries: int | None = Field(default=None, ge=1, description="Resample cap")

    @model_validator(mode="after")
    def _check_probs(self) -> "GraphSpec":
        if len(self.send_recv_probs) != self.partition.S:
            raise ValueError(
                f"send_recv_probs must have S={self.partition.S} entries, got {len(self.send_recv_probs)}"
            )
        if any(not (0.0 < p <= 1.0) for p in self.send_recv_probs):
            raise ValueError("every send_recv_prob must lie in (0, 1]")
        if self.explicit_weights is not None:
            n = self.partition.N
            if len(self.explicit_weights) != n or any(len(row) != n for row in self.explicit_weights):
                raise ValueError(f"explicit_weights must be {n} x {n}")
        return self


@dataclass(frozen=True)
class CombinationMatrix:
    """Left-stochastic weights, a_{lk} = weight agent k gives to agent l"""
    entries: np.ndarray
    partition: NetworkPartition

    @property
    def N(self) -> int:
        return self.partition.N

    def to_payload(self) -> dict:
        return {
            "partition": self.partition.model_dump(),
            "entries": self.entries.tolist(),
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "CombinationMatrix":
        return cls(
            entries=np.asarray(payload["entries"], dtype=float),
            partition=NetworkPartition.model_validate(payload["partition"]),
        )


@dataclass(frozen=True)
class BlockDecomposition:
    A_S: np.ndarray
    A_SR: np.ndarray
    A_R: np.ndarray

    def assemble(self) -> np.ndarray:
        n_s, n_r = self.A_SR.shape
        return np.block([[self.A_S, self.A_SR], [np.zeros((n_r, n_s)), self.A_R]])


@dataclass(frozen=True)
class LimitingMatrices:
    E: np.ndarray
    W: np.ndarray
    Omega: np.ndarray
    perron: list[np.ndarray]
    spectral_radius_R: float = field(default=float("nan"))

    def A_inf(self) -> np.ndarray:
        """Limit of A^i: [[E, Omega], [0, 0]]"""
        n_s, n_r = self.Omega.shape
        return np.block([[self.E, self.Omega], [np.zeros((n_r, n_s)), np.zeros((n_r, n_r))]])


@dataclass(frozen=True)
class AggregateWeights:
    """x[s, j]: influence of sending component s on the j-th receiving agent"""
    x: np.ndarray
    receiving_labels: list[int]

    def column(self, agent: int) -> np.ndarray:
        """x_k for a 1-based receiving agent label"""
        try:
            j = self.receiving_labels.index(agent)
        except ValueError as exc:
            raise IndexError(f"agent {agent} is not a receiving agent") from exc
        return self.x[:, j]
