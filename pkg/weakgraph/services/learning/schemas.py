"""
Schemas untuk belief states and recorded trajectories
"""
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field
from scipy.special import logsumexp

from weakgraph.core.exceptions import InvalidBelief, MissingRecord

NORMALIZATION_TOL = 1e-10


@dataclass(frozen=True)
class BeliefState:
    """Log-beliefs log mu[k, theta] after `iteration` rounds"""
    log_mu: np.ndarray
    iteration: int = 0
    log_psi: np.ndarray | None = None
    floor_hits: int = 0

    @property
    def N(self) -> int:
        return self.log_mu.shape[0]

    @property
    def H(self) -> int:
        return self.log_mu.shape[1]

    def beliefs(self) -> np.ndarray:
        """Linear-domain beliefs, for reporting only"""
        return np.exp(self.log_mu)

    def validate(self, tol: float = NORMALIZATION_TOL) -> None:
        if not np.all(np.isfinite(self.log_mu)):
            raise InvalidBelief("beliefs must be strictly positive (finite log values)")
        error = float(np.max(np.abs(logsumexp(self.log_mu, axis=1))))
        if error > tol:
            raise InvalidBelief(f"belief rows are not normalized (max log-mass error {error:.3e})")

    @classmethod
    def from_probabilities(cls, probabilities: np.ndarray) -> "BeliefState":
        p = np.asarray(probabilities, dtype=float)
        if p.ndim != 2 or p.shape[1] < 2:
            raise InvalidBelief("beliefs must be an N x H array with H >= 2")
        if np.any(p <= 0):
            raise InvalidBelief("every initial belief must assign positive mass to every hypothesis")
        log_mu = np.log(p)
        state = cls(log_mu=log_mu - logsumexp(log_mu, axis=1, keepdims=True))
        state.validate()
        return state


class RecordSpec(BaseModel):
    """Which snapshots a run keeps"""
    agents: list[int] | None = Field(default=None, description="1-based agent labels; None records all")
    fields: list[Literal["psi", "mu"]] = Field(default_factory=lambda: ["psi", "mu"])
    stride: int = Field(default=1, ge=1, description="Record every `stride` iterations")
    iterations: list[int] = Field(default_factory=list, description="Extra iterations to record")

    def wants(self, iteration: int) -> bool:
        return iteration % self.stride == 0 or iteration in self.iterations


@dataclass(frozen=True)
class TrajectoryRecord:
    iterations: np.ndarray
    agents: list[int]
    H: int
    seed: int
    log_psi: np.ndarray | None = None
    log_mu: np.ndarray | None = None
    floor_hits: int = 0
    metadata: dict = field(default_factory=dict)

    def _position(self, iteration: int) -> int:
        hits = np.flatnonzero(self.iterations == iteration)
        if hits.size == 0:
            raise MissingRecord(f"iteration {iteration} was not recorded")
        return int(hits[0])

    def snapshot(self, iteration: int, kind: Literal["psi", "mu"] = "psi") -> np.ndarray:
        """(len(agents), H) log-beliefs at one recorded iteration"""
        data = self.log_psi if kind == "psi" else self.log_mu
        if data is None:
            raise MissingRecord(f"log {kind} was not recorded")
        return data[self._position(iteration)]

    def agent_row(self, iteration: int, agent: int, kind: Literal["psi", "mu"] = "psi") -> np.ndarray:
        if agent not in self.agents:
            raise MissingRecord(f"agent {agent} was not recorded")
        return self.snapshot(iteration, kind)[self.agents.index(agent)]

    def to_frame(self) -> pd.DataFrame:
        """Long format: iteration, agent, theta, log_psi, log_mu"""
        n_snap, n_agents = len(self.iterations), len(self.agents)
        shape = (n_snap, n_agents, self.H)
        nan = np.full(shape, np.nan)
        psi = self.log_psi if self.log_psi is not None else nan
        mu = self.log_mu if self.log_mu is not None else nan
        grid_i, grid_a, grid_t = np.meshgrid(
            self.iterations, np.asarray(self.agents), np.arange(1, self.H + 1), indexing="ij"
        )
        return pd.DataFrame(
            {
                "iteration": grid_i.ravel(),
                "agent": grid_a.ravel(),
                "theta": grid_t.ravel(),
                "log_psi": psi.ravel(),
                "log_mu": mu.ravel(),
            }
        )

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, seed: int = 0) -> "TrajectoryRecord":
        """Inverse of to_frame; agent order follows first appearance"""
        agents = [int(a) for a in dict.fromkeys(frame["agent"])]
        position = {agent: i for i, agent in enumerate(agents)}
        ordered = (
            frame.assign(_pos=frame["agent"].map(position))
            .sort_values(["iteration", "_pos", "theta"], kind="stable")
        )
        iterations = np.unique(ordered["iteration"].to_numpy(dtype=int))
        H = int(ordered["theta"].max())
        shape = (len(iterations), len(agents), H)
        if len(ordered) != int(np.prod(shape)):
            raise MissingRecord("trajectory table is not a complete iteration x agent x theta grid")

        def block(column: str) -> np.ndarray | None:
            values = ordered[column].to_numpy(dtype=float)
            return None if np.all(np.isnan(values)) else values.reshape(shape)

        return cls(
            iterations=iterations,
            agents=agents,
            H=H,
            seed=seed,
            log_psi=block("log_psi"),
            log_mu=block("log_mu"),
        )
