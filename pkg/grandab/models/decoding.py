# Decoder data models
from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_serializer, model_validator

from grandab.config.settings import settings
from grandab.services.gf2 import BitVector


class DecodeStatus(str, Enum):
    """Outcome of one decoding attempt"""
    DECODED = "decoded"
    ABANDONED = "abandoned"


class Phase(str, Enum):
    """Schedule phase of the dial architecture"""
    WEIGHT0 = "weight0"
    WEIGHT1 = "weight1"
    WEIGHT2 = "weight2"
    WEIGHT3 = "weight3"
    DONE = "done"


class GrandConfig(BaseModel):
    """GRANDAB parameters"""
    ab: int = Field(
        default_factory=lambda: settings.DEFAULT_AB,
        ge=0,
        description="Maximum error-pattern weight",
    )

    model_config = ConfigDict(frozen=True)


class DecodeResult(BaseModel):
    """Result of a GRANDAB decode, from either the serial oracle or the dial engine"""
    status: DecodeStatus
    codeword: Optional[BitVector] = None
    message: Optional[BitVector] = None
    flipped: Tuple[int, ...] = ()
    weight: int = 0
    queries: int = Field(..., ge=0, description="Membership checks performed")
    latency_cycles: int = Field(0, ge=0, description="Time steps consumed (dial engine only)")

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def _check_consistency(self) -> "DecodeResult":
        if self.weight != len(self.flipped):
            raise ValueError(f"weight {self.weight} does not match flipped {self.flipped}")
        if list(self.flipped) != sorted(self.flipped):
            raise ValueError(f"flipped positions must be sorted, got {self.flipped}")
        if self.status is DecodeStatus.DECODED and self.codeword is None:
            raise ValueError("decoded result requires a codeword")
        carries_word = self.codeword is not None or self.message is not None
        if self.status is DecodeStatus.ABANDONED and carries_word:
            raise ValueError("abandoned result carries no codeword or message")
        return self

    @field_serializer("codeword", "message")
    def _serialize_word(self, word: Optional[BitVector]) -> Optional[str]:
        return word.to_hex() if word is not None else None

    @property
    def decoded(self) -> bool:
        return self.status is DecodeStatus.DECODED
