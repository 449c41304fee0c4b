# Arguments shared by the sub-commands
import argparse
from pathlib import Path

from grandab.config.settings import settings
from grandab.models.simulation import CodeSource
from grandab.services.gf2 import BitVector
from grandab.utils.errors import ConfigurationError
from grandab.utils.validators import parse_crc_code, parse_hex_word


def add_code_arguments(parser: argparse.ArgumentParser) -> None:
    """--code crc:n,k,poly or --hfile PATH, exactly one"""
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--code", metavar="crc:n,k,poly", help="CRC code, e.g. crc:128,112,0x1021")
    group.add_argument("--hfile", type=Path, metavar="PATH", help="Parity-check matrix file")


def add_ab_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--ab",
        type=int,
        choices=(1, 2, 3),
        default=settings.DEFAULT_AB,
        help=f"Abandonment weight (default {settings.DEFAULT_AB})",
    )


def code_source_from_args(args: argparse.Namespace) -> CodeSource:
    if args.code is not None:
        return CodeSource(crc=parse_crc_code(args.code))
    return CodeSource(hfile=args.hfile)


def received_word(text: str, n: int) -> BitVector:
    """Parse --rx: a hex word of ceil(n/4) digits, or n characters in {0,1} when prefixed 0b"""
    cleaned = "".join(text.split())
    if cleaned.lower().startswith("0b"):
        bits = cleaned[2:]
        if len(bits) != n or set(bits) - {"0", "1"}:
            raise ConfigurationError(f"binary word must have {n} digits in {{0,1}}, got '{text}'")
        return BitVector.from_bits([int(b) for b in bits])
    digits = parse_hex_word(cleaned)
    if len(digits) != (n + 3) // 4:
        raise ConfigurationError(
            f"hex word for n={n} must have {(n + 3) // 4} digits, got {len(digits)}"
        )
    try:
        return BitVector.from_hex(digits, n)
    except ValueError as e:
        raise ConfigurationError(str(e))
