# trace: per-cycle trace of the dial architecture
import argparse
import sys

from grandab.cli.options import (
    add_ab_argument,
    add_code_arguments,
    code_source_from_args,
    received_word,
)
from grandab.models.decoding import GrandConfig
from grandab.services.code_cache import load_code
from grandab.services.decoders import dial_engine


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "trace",
        help="Print the dial engine's per-cycle trace",
        description="Print one line per cycle. Without --rx, walk the full schedule for the "
        "code length with no received word.",
    )
    add_code_arguments(parser)
    add_ab_argument(parser)
    parser.add_argument("--rx", metavar="HEXSTRING", help="Received word (hex or 0b...)")
    parser.set_defaults(func=run)


def run(args: argparse.Namespace) -> int:
    code = load_code(code_source_from_args(args))
    out = sys.stdout
    cycles = dial_engine.worst_case_cycles(code.n, args.ab)
    out.write(f"# {code!r} ab={args.ab} worst_case_cycles={cycles}\n")

    if args.rx is None:
        for report in dial_engine.iter_schedule(code.n, args.ab):
            out.write(report.trace_line() + "\n")
        return 0

    received = received_word(args.rx, code.n)
    result = dial_engine.decode(code, received, GrandConfig(ab=args.ab), trace=out)
    flipped = ",".join(str(i) for i in result.flipped) or "-"
    out.write(
        f"# status={result.status.value} flipped={flipped} checks={result.queries} "
        f"latency_cycles={result.latency_cycles}\n"
    )
    return 0
