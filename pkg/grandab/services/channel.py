# BPSK over AWGN with hard-decision demodulation
#
# SNR comes from the noise variance alone: SNR_dB = -10*log10(sigma^2), sigma = 10^(-SNR/20).
# Random numbers come from a counter-based Philox generator keyed by (seed, stream id), which gives
# every worker an independent, reproducible substream.

import logging
import math

import numpy as np
from scipy.stats import norm

from grandab.models.simulation import ChannelConfig
from grandab.services.gf2 import BitVector
from grandab.utils.errors import ConfigurationError

logger = logging.getLogger(__name__)


def sigma_from_snr_db(snr_db: float) -> float:
    return 10 ** (-snr_db / 20)


def snr_db_from_sigma(sigma: float) -> float:
    if sigma <= 0:
        raise ConfigurationError(f"noise standard deviation must be positive, got {sigma}")
    return -20 * math.log10(sigma)


def snr_to_ebn0_db(snr_db: float, rate: float) -> float:
    """Eb/N0 for unit-energy BPSK at code rate R: SNR - 10*log10(2R)"""
    if not 0 < rate <= 1:
        raise ConfigurationError(f"code rate must lie in (0, 1], got {rate}")
    return snr_db - 10 * math.log10(2 * rate)


def ebn0_to_snr_db(ebn0_db: float, rate: float) -> float:
    if not 0 < rate <= 1:
        raise ConfigurationError(f"code rate must lie in (0, 1], got {rate}")
    return ebn0_db + 10 * math.log10(2 * rate)


def bsc_crossover(snr_db: float) -> float:
    """Raw bit-flip probability of hard-decision BPSK: Q(1/sigma)"""
    return float(norm.sf(1 / sigma_from_snr_db(snr_db)))


def make_rng(seed: int, stream_id: int = 0) -> np.random.Generator:
    """Independent generator for substream ``stream_id`` of master ``seed``"""
    if not 0 <= seed < 2**64 or not 0 <= stream_id < 2**64:
        raise ConfigurationError(f"seed and stream id must be 64-bit unsigned: {seed}, {stream_id}")
    return np.random.Generator(np.random.Philox(key=seed + (stream_id << 64)))


def rng_for(cfg: ChannelConfig) -> np.random.Generator:
    return make_rng(cfg.seed, cfg.stream_id)


def transmit_hard(codeword: BitVector, cfg: ChannelConfig, rng: np.random.Generator) -> BitVector:
    """
    Send a codeword through BPSK/AWGN and slice at zero

    Bit b maps to 1 - 2b; a received value >= 0 decides 0, otherwise 1.

    Args:
        codeword: Transmitted bits
        cfg: Channel parameters (noiseless returns the codeword unchanged)
        rng: Generator for this substream

    Returns:
        Hard-decision vector r
    """
    if cfg.noiseless:
        return codeword
    symbols = 1.0 - 2.0 * codeword.to_bits()
    received = symbols + cfg.sigma * rng.standard_normal(len(codeword))
    return BitVector.from_bits((received < 0).astype(np.uint8))
