# Linear block codes: construction, encoding, syndromes and parity-check file I/O
from grandab.services.codes.builder import (
    LinearCode,
    correct_word,
    crc_code,
    encode,
    extract_message,
    from_parity_check,
    hamming_parity_check,
    is_codeword,
    syndrome,
)
from grandab.services.codes.hfile import (
    dump_parity_check,
    format_parity_check,
    load_parity_check,
    parse_parity_check,
)

__all__ = [
    "LinearCode",
    "correct_word",
    "crc_code",
    "dump_parity_check",
    "encode",
    "extract_message",
    "format_parity_check",
    "from_parity_check",
    "hamming_parity_check",
    "is_codeword",
    "load_parity_check",
    "parse_parity_check",
    "syndrome",
]
