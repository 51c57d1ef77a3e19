"""Beam-splitter schema."""
from pydantic import BaseModel, ConfigDict, Field


class SplitterSpec(BaseModel):
    """Beam splitter of transmissivity tau followed by one detector per output arm."""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    tau: float = Field(default=0.5, gt=0.0, lt=1.0, description="Transmissivity into arm 1.")
    eta1: float = Field(default=1.0, ge=0.0, le=1.0, description="Arm-1 detector efficiency.")
    eta2: float = Field(default=1.0, ge=0.0, le=1.0, description="Arm-2 detector efficiency.")

    @property
    def t1(self) -> float:
        """Overall survival probability of an input photon into detected arm 1."""
        return self.tau * self.eta1

    @property
    def t2(self) -> float:
        return (1.0 - self.tau) * self.eta2
