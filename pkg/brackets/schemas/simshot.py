"""
Sweep configuration schemas.

A sweep emulates the piezo-driven phase scan: `steps` positions, each
with `shots_per_step` laser shots, the local-oscillator/signal phase at
each position given by a phase profile.

Profiles (discriminated on `kind`)
----------------------------------
  piezo   smooth monotone cubic distortion of a linear ramp spanning
          `fringes` interference periods, plus multiplicative step jitter
  linear  evenly spaced phases from `start` to `stop`
  table   explicit per-step phases
"""
from __future__ import annotations

from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

DEFAULT_STEPS = 320
DEFAULT_SHOTS_PER_STEP = 30_000
DEFAULT_SEED = 20_140_901


class PiezoProfile(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    kind: Literal["piezo"] = "piezo"
    fringes: float = Field(default=2.5, gt=0.0, description="Interference periods covered.")
    start: float = Field(default=0.35, description="Phase at step 0.")
    distortion: float = Field(
        default=0.3,
        gt=-1.0,
        lt=2.0,
        description="Cubic nonlinearity; the bounds keep the map monotone.",
    )
    jitter: float = Field(default=0.02, ge=0.0, lt=0.5, description="Relative step-size jitter.")


class LinearProfile(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    kind: Literal["linear"] = "linear"
    start: float = 0.0
    stop: float


class TableProfile(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    kind: Literal["table"] = "table"
    phases: list[float] = Field(min_length=2)


PhaseProfile = Annotated[
    Union[PiezoProfile, LinearProfile, TableProfile],
    Field(discriminator="kind"),
]


class SweepConfig(BaseModel):
    """Full description of a simulated phase sweep; echoed into the dataset sidecar."""
    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    steps: int = Field(default=DEFAULT_STEPS, ge=2)
    shots_per_step: int = Field(default=DEFAULT_SHOTS_PER_STEP, ge=1)
    b: float = Field(default=2.0, ge=0.0, description="Signal amplitude.")
    mag: float = Field(default=2.0, ge=0.0, description="Local-oscillator amplitude |alpha|.")
    tau: float = Field(default=0.5, gt=0.0, lt=1.0)
    eta1: float = Field(default=0.5, ge=0.0, le=1.0)
    eta2: float = Field(default=0.5, ge=0.0, le=1.0)
    phase_profile: PhaseProfile = PiezoProfile()
    noise: float = Field(
        default=0.0,
        ge=0.0,
        lt=1.0,
        description="Relative Gaussian jitter of the shot energy |A|^2.",
    )
    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2**64)

    @model_validator(mode="after")
    def check_table_length(self) -> "SweepConfig":
        profile = self.phase_profile
        if isinstance(profile, TableProfile) and len(profile.phases) != self.steps:
            raise ValueError(
                f"table profile has {len(profile.phases)} phases for {self.steps} steps"
            )
        return self
