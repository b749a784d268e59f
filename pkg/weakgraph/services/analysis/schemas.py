from typing import Literal

from pydantic import BaseModel, Field

Region = Literal["N1-dominant", "N2-dominant", "middle"]


class NetworkDivergence(BaseModel):
    agent: int = Field(..., description="1-based receiving agent label")
    divergences: list[float] = Field(..., description="Network divergence for theta = 1..H")
    theta_star: int | None = Field(default=None, description="Unique minimizer, None when tied")
    unique: bool
    rates: list[float] | None = Field(default=None, description="D_k(theta*) - D_k(theta)")
    region: Region | None = Field(default=None, description="Canonical-example label when applicable")
    aggregate_weights: list[float] = Field(..., description="x_k, one entry per sending component")


class AnalysisReport(BaseModel):
    H: int
    S: int
    agents: list[NetworkDivergence]

    def theta_stars(self) -> dict[int, int | None]:
        return {entry.agent: entry.theta_star for entry in self.agents}
