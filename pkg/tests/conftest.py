# Shared fixtures
from pathlib import Path

import numpy as np
import pytest

from grandab.models.simulation import CrcSpec
from grandab.services.channel import make_rng
from grandab.services.codes import crc_code, from_parity_check, hamming_parity_check

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def hamming_file() -> Path:
    return FIXTURES / "hamming_7_4.txt"


@pytest.fixture(scope="session")
def hamming_code():
    """(7,4) Hamming code built from its parity-check matrix (non-systematic G)"""
    return from_parity_check(hamming_parity_check(), name="hamming")


@pytest.fixture(scope="session")
def crc_7_4():
    """Cyclic (7,4) Hamming code, g(x) = x^3 + x + 1"""
    return crc_code(CrcSpec(n=7, k=4, poly=0x3))


@pytest.fixture(scope="session")
def crc_16_8():
    return crc_code(CrcSpec(n=16, k=8, poly=0x07))


@pytest.fixture(scope="session")
def repetition_7():
    """(7,1) repetition code as a CRC with g(x) = 1 + x + ... + x^6"""
    return crc_code(CrcSpec(n=7, k=1, poly=0x3F))


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(2021)


@pytest.fixture(scope="session")
def crc_128_codes():
    """The four length-128 CRC codes keyed by k"""
    polys = {96: 0x04C11DB7, 104: 0xB2B117, 112: 0x1021, 120: 0xD5}
    return {k: crc_code(CrcSpec(n=128, k=k, poly=poly)) for k, poly in polys.items()}
