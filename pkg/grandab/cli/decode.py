# decode: decode one received word and print the DecodeResult as JSON
import argparse
import logging

from grandab.cli.options import (
    add_ab_argument,
    add_code_arguments,
    code_source_from_args,
    received_word,
)
from grandab.models.decoding import GrandConfig
from grandab.services.code_cache import load_code
from grandab.services.decoders import dial_engine
from grandab.services.decoders.reference import grandab_decode

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "decode",
        help="Decode a single hard-decision word",
        description="Decode one received word; --rx is hex (position 1 = most significant bit) "
        "or 0b followed by n binary digits",
    )
    add_code_arguments(parser)
    add_ab_argument(parser)
    parser.add_argument("--rx", required=True, metavar="HEXSTRING", help="Received word")
    parser.add_argument(
        "--decoder",
        choices=("dial", "ref"),
        default="dial",
        help="Dial architecture model or serial reference (default dial)",
    )
    parser.set_defaults(func=run)


def run(args: argparse.Namespace) -> int:
    code = load_code(code_source_from_args(args))
    received = received_word(args.rx, code.n)
    cfg = GrandConfig(ab=args.ab)

    if args.decoder == "ref":
        result = grandab_decode(code, received, cfg)
    else:
        result = dial_engine.decode(code, received, cfg)

    logger.debug(f"Decoded {received.to_hex()} with {args.decoder}: {result.status.value}")
    print(result.model_dump_json(indent=2))
    return 0
