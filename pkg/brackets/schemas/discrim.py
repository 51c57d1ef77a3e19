"""Receiver schema."""
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from brackets.schemas.photostat import DetectorModel
from brackets.schemas.states import Displacement


class ReceiverSpec(BaseModel):
    """
    Kennedy-like ON/OFF receiver generalized to a count threshold.

    Declares "+" when the detected count is >= threshold. When
    `displacement` is omitted the receiver nulls the "-" hypothesis
    with beta = b for whatever b it is asked about.
    """
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    displacement: Optional[Displacement] = None
    threshold: int = Field(default=1, ge=1)
    det: DetectorModel = DetectorModel()
