"""
Per-subcommand request models.

Each subcommand validates its parsed flags into one of these before any
computation runs. Unknown keys are rejected; physical bounds are checked
again by the services that consume the values.
"""
from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from brackets.schemas.simshot import DEFAULT_SEED


class RunRequest(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    out: str = Field(min_length=1, description="Output path prefix.")
    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2**64)


class WignerRequest(RunRequest):
    b: float = Field(ge=0.0)
    gamma: float = Field(ge=0.0)
    extent: float = Field(default=4.0, gt=0.0)
    n: int = Field(default=201, ge=2)


class CurvesRequest(RunRequest):
    b: float = Field(default=2.0, ge=0.0)
    mag: float = Field(default=2.0, ge=0.0)
    gammas: list[float] = Field(min_length=1)
    tau: float = Field(default=0.5, gt=0.0, lt=1.0)
    etas: list[float] = Field(default_factory=lambda: [1.0], min_length=1)
    nphi: int = Field(default=64, ge=1)
    distribution_phis: list[float] = Field(default_factory=list)


class SweepRequest(RunRequest):
    config: Optional[str] = Field(default=None, description="JSON file holding a SweepConfig.")
    seed: Optional[int] = Field(default=None, ge=0, lt=2**64)
    workers: Optional[int] = Field(default=None, ge=1)


class RetrieveRequest(RunRequest):
    dataset: str = Field(min_length=1)
    centers: list[float] = Field(min_length=1)
    gammas: list[float] = Field(min_length=1)
    arm: int = Field(default=1, ge=1, le=2)
    batches: int = Field(default=50, ge=2)
    seed: Optional[int] = Field(default=None, ge=0, lt=2**64)


class DiscriminateRequest(RunRequest):
    bs: list[float] = Field(min_length=1)
    gammas: list[float] = Field(min_length=1)
    dephases: list[float] = Field(default_factory=lambda: [0.0], min_length=1)
    beta: Optional[float] = Field(default=None, ge=0.0, description="Displacement magnitude; default b.")
    beta_phase: float = 0.0
    threshold: int = Field(default=1, ge=1)
    eta: float = Field(default=1.0, ge=0.0, le=1.0)
    workers: Optional[int] = Field(default=None, ge=1)
