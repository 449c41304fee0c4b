# Parsing and validation of command-line values
import math
from typing import List

from pydantic import ValidationError

from grandab.models.simulation import CrcSpec
from grandab.utils.errors import ConfigurationError

# Guards against runaway grids from a mistyped step
MAX_SNR_POINTS = 1000


def _parse_int(text: str, what: str) -> int:
    try:
        return int(text.strip(), 0)
    except ValueError:
        raise ConfigurationError(f"{what} must be an integer, got '{text}'")


def _parse_float(text: str, what: str) -> float:
    try:
        value = float(text.strip())
    except ValueError:
        raise ConfigurationError(f"{what} must be a number, got '{text}'")
    if not math.isfinite(value):
        raise ConfigurationError(f"{what} must be finite, got '{text}'")
    return value


def parse_crc_code(text: str) -> CrcSpec:
    """
    Parse "crc:n,k,poly" (poly in any Python integer base, e.g. 0x8d or 141)

    Raises:
        ConfigurationError: If the string is malformed or the parameters are inconsistent
    """
    prefix, _, body = text.strip().partition(":")
    if prefix.lower() != "crc" or not body:
        raise ConfigurationError(f"code must look like crc:n,k,poly, got '{text}'")
    parts = body.split(",")
    if len(parts) != 3:
        raise ConfigurationError(f"code must look like crc:n,k,poly, got '{text}'")
    n = _parse_int(parts[0], "n")
    k = _parse_int(parts[1], "k")
    poly = _parse_int(parts[2], "poly")
    try:
        return CrcSpec(n=n, k=k, poly=poly)
    except ValidationError as e:
        raise ConfigurationError(f"invalid CRC code '{text}': {e.errors()[0]['msg']}")


def parse_snr_range(text: str) -> List[float]:
    """
    Parse SNR points in dB

    Accepts "start:step:stop" (stop included when it lies on the grid), a comma list
    "4,5.5,7" or a single value.

    Raises:
        ConfigurationError: If the range is empty or malformed
    """
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigurationError(f"SNR range must be start:step:stop, got '{text}'")
        start, step, stop = (_parse_float(p, "SNR range value") for p in parts)
        if step <= 0:
            raise ConfigurationError(f"SNR step must be positive, got {step}")
        if stop < start:
            raise ConfigurationError(f"SNR stop {stop} is below start {start}")
        # tolerance keeps 4:0.1:5 from losing its last point to rounding
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        if count > MAX_SNR_POINTS:
            raise ConfigurationError(f"SNR range has {count} points (max {MAX_SNR_POINTS})")
        return [round(start + i * step, 10) for i in range(count)]

    points = [_parse_float(p, "SNR value") for p in text.split(",") if p.strip()]
    if not points:
        raise ConfigurationError("at least one SNR point is required")
    return points


def parse_hex_word(text: str) -> str:
    """Normalize a hex word: strip whitespace, underscores and an optional 0x prefix"""
    cleaned = "".join(text.split()).replace("_", "").lower()
    if cleaned.startswith("0x"):
        cleaned = cleaned[2:]
    if not cleaned or any(c not in "0123456789abcdef" for c in cleaned):
        raise ConfigurationError(f"'{text}' is not a hex word")
    return cleaned
