"""
State-parameter schemas.

BracketSpec    amplitude b and phase spread gamma of a bracket state
Displacement   local-oscillator field |alpha| e^{i phi}
PhasePoint     a point z = re + i im of phase space

All angles are radians. Models are frozen: values are safe to share
between threads once built.
"""
from __future__ import annotations

import math

from pydantic import BaseModel, ConfigDict, Field


class BracketSpec(BaseModel):
    """Balanced mixture of |±b e^{i psi}> with psi uniform on [-gamma/2, gamma/2]."""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    b: float = Field(ge=0.0, description="Real field amplitude of the mixed coherent states.")
    gamma: float = Field(
        ge=0.0,
        le=math.pi,
        description="Phase spread. 0 = two-state PSK mixture, pi = phase-averaged state.",
    )


class Displacement(BaseModel):
    """Coherent displacement alpha = mag * e^{i phase} applied by the local oscillator."""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    mag: float = Field(ge=0.0, description="|alpha|.")
    phase: float = Field(default=0.0, description="Relative phase phi; used modulo 2 pi.")

    @property
    def amplitude(self) -> complex:
        return self.mag * complex(math.cos(self.phase), math.sin(self.phase))


class PhasePoint(BaseModel):
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    re: float
    im: float = 0.0
