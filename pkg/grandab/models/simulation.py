# Channel and Monte Carlo simulation models
import math
from enum import Enum
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from grandab.config.settings import settings


class CrcSpec(BaseModel):
    """Systematic CRC code: generator polynomial with implicit leading x^(n-k) term"""
    n: int = Field(..., ge=2, description="Code length in bits")
    k: int = Field(..., ge=1, description="Message length in bits")
    poly: int = Field(..., ge=1, description="Generator polynomial coefficients")

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_lengths(self) -> "CrcSpec":
        if self.k >= self.n:
            raise ValueError(f"k must be smaller than n (got n={self.n}, k={self.k})")
        return self

    @property
    def label(self) -> str:
        return f"crc:{self.n},{self.k},{self.poly:#x}"


class CodeSource(BaseModel):
    """Where a linear code comes from: a CRC spec or a parity-check matrix file"""
    crc: Optional[CrcSpec] = None
    hfile: Optional[Path] = None

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _exactly_one(self) -> "CodeSource":
        if (self.crc is None) == (self.hfile is None):
            raise ValueError("exactly one of crc or hfile must be given")
        return self

    @property
    def label(self) -> str:
        return self.crc.label if self.crc is not None else str(self.hfile)


class ChannelConfig(BaseModel):
    """BPSK/AWGN channel with hard-decision demodulation"""
    snr_db: float = Field(0.0, description="SNR = -10*log10(sigma^2)")
    seed: int = Field(default_factory=lambda: settings.SEED, ge=0, lt=2**64)
    stream_id: int = Field(0, ge=0, lt=2**64)
    noiseless: bool = False

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_snr(self) -> "ChannelConfig":
        if not self.noiseless and not math.isfinite(self.snr_db):
            raise ValueError("snr_db must be finite; use noiseless=True for a perfect channel")
        return self

    @property
    def sigma(self) -> float:
        return 0.0 if self.noiseless else 10 ** (-self.snr_db / 20)


class DecoderKind(str, Enum):
    """Decoder(s) run per frame in a sweep"""
    DIAL = "dial"
    REF = "ref"
    BOTH = "both"


class SimJob(BaseModel):
    """One Monte Carlo sweep over SNR points"""
    code: CodeSource
    ab: int = Field(default_factory=lambda: settings.DEFAULT_AB, ge=1, le=3)
    snr_points: List[float] = Field(..., min_length=1)
    min_frame_errors: int = Field(default_factory=lambda: settings.MIN_FRAME_ERRORS, ge=1)
    max_frames: int = Field(default_factory=lambda: settings.MAX_FRAMES, ge=1)
    clock_mhz: float = Field(default_factory=lambda: settings.CLOCK_MHZ, gt=0)
    decoder: DecoderKind = DecoderKind.DIAL
    seed: int = Field(default_factory=lambda: settings.SEED, ge=0, lt=2**64)
    workers: int = Field(default_factory=lambda: settings.WORKERS, ge=1)
    block_frames: int = Field(default_factory=lambda: settings.BLOCK_FRAMES, ge=1)
    noiseless: bool = False

    model_config = ConfigDict(frozen=True)


# Column order of the results CSV
CSV_COLUMNS = (
    "snr_db",
    "frames",
    "frame_errors",
    "fer",
    "avg_queries",
    "avg_latency_cycles",
    "wc_latency_cycles",
    "avg_info_tput_mbps",
    "wc_info_tput_mbps",
)


class SimStats(BaseModel):
    """Aggregated results of one SNR point"""
    snr_db: float
    frames: int
    frame_errors: int
    fer: float
    avg_queries: float
    avg_latency_cycles: Optional[float] = None
    wc_latency_cycles: int
    avg_info_tput_mbps: Optional[float] = None
    wc_info_tput_mbps: float

    # Not part of the CSV
    low_confidence: bool = False
    disagreements: int = 0
    avg_checks: Optional[float] = None
    raw_flip_rate: float = 0.0

    def csv_row(self) -> List[str]:
        """Values in CSV_COLUMNS order; missing values are empty cells"""
        values = [getattr(self, column) for column in CSV_COLUMNS]
        return ["" if value is None else str(value) for value in values]
