"""Detector schema."""
from pydantic import BaseModel, ConfigDict, Field


class DetectorModel(BaseModel):
    """Efficiency-only photon-number-resolving detector (binomial thinning)."""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    eta: float = Field(default=1.0, ge=0.0, le=1.0, description="Quantum efficiency.")
