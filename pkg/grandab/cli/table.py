# table: worst-case latency and throughput of the dial architecture, no simulation
import argparse

from grandab.config.settings import settings
from grandab.services.decoders import dial_engine
from grandab.services.decoders.reference import count_max_queries
from grandab.services.harness import latency_ns, throughput
from grandab.utils.errors import ConfigurationError

# Published latencies of an algebraic (79,64) BCH hard decoder, for side-by-side comparison
BCH_79_64_LATENCY_NS = {"min": 1.1, "avg": 1.1, "max": 3.0}


def _parse_k_list(text: str) -> list:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigurationError(f"--k must be a comma list of integers, got '{text}'")
    if not values:
        raise ConfigurationError("--k needs at least one value")
    return values


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "table",
        help="Print worst-case latency and throughput",
        description="Worst-case cycles, latency and information throughput for code length n",
    )
    parser.add_argument("--n", type=int, required=True, help="Code length")
    parser.add_argument("--k", required=True, help="Comma list of message lengths, e.g. 96,104")
    parser.add_argument("--ab", type=int, choices=(1, 2, 3), default=settings.DEFAULT_AB)
    parser.add_argument("--clock-mhz", type=float, default=settings.CLOCK_MHZ)
    parser.add_argument(
        "--bch-reference", action="store_true", help="Also print the (79,64) BCH decoder latencies"
    )
    parser.set_defaults(func=run)


def run(args: argparse.Namespace) -> int:
    ks = _parse_k_list(args.k)
    if args.clock_mhz <= 0:
        raise ConfigurationError(f"--clock-mhz must be positive, got {args.clock_mhz}")
    for k in ks:
        if not 1 <= k < args.n:
            raise ConfigurationError(f"k={k} must lie in [1..n-1] for n={args.n}")

    n, ab, clock = args.n, args.ab, args.clock_mhz
    cycles = dial_engine.worst_case_cycles(n, ab)
    queries = count_max_queries(n, ab)
    factor = dial_engine.parallelization_factor(n, ab)

    print(f"n={n} ab={ab} clock={clock:g} MHz")
    print(f"worst-case queries: {queries}")
    print(f"worst-case cycles:  {cycles} ({latency_ns(cycles, clock):.2f} ns)")
    print(f"best-case latency:  1 cycle ({latency_ns(1, clock):.2f} ns)")
    print(f"parallelization:    {factor:.2f} queries/cycle ({100 / factor:.2f}% of queries)")
    print()
    print(f"{'k':>6} {'rate':>7} {'W.C. T/P (Mbps)':>16} {'B.C. T/P (Mbps)':>16}")
    for k in ks:
        print(
            f"{k:>6} {k / n:>7.4f} {throughput(k, cycles, clock):>16.2f} "
            f"{throughput(k, 1, clock):>16.2f}"
        )

    if args.bch_reference:
        print()
        print(
            "BCH (79,64) reference latency: "
            + ", ".join(f"{name} {value:g} ns" for name, value in BCH_79_64_LATENCY_NS.items())
        )
    return 0
