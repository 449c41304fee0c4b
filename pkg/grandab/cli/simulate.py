# simulate: Monte Carlo FER / query / latency / throughput sweep
import argparse
import logging
import sys
from pathlib import Path

from grandab.cli.options import add_ab_argument, add_code_arguments, code_source_from_args
from grandab.config.settings import settings
from grandab.models.simulation import CSV_COLUMNS, DecoderKind, SimJob
from grandab.services.harness import emit_csv, run_sweep
from grandab.utils.validators import parse_snr_range

logger = logging.getLogger(__name__)

DEFAULT_SNR = f"{settings.SNR_START}:{settings.SNR_STEP}:{settings.SNR_STOP}"


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "simulate",
        help="Run a Monte Carlo sweep over SNR points",
        description="Simulate BPSK/AWGN hard-decision GRANDAB decoding and write a results CSV",
    )
    add_code_arguments(parser)
    add_ab_argument(parser)
    parser.add_argument(
        "--snr",
        default=DEFAULT_SNR,
        help=f"start:step:stop, a comma list or one value (default {DEFAULT_SNR})",
    )
    parser.add_argument("--min-errors", type=int, default=settings.MIN_FRAME_ERRORS)
    parser.add_argument("--max-frames", type=int, default=settings.MAX_FRAMES)
    parser.add_argument("--clock-mhz", type=float, default=settings.CLOCK_MHZ)
    parser.add_argument(
        "--decoder", choices=[kind.value for kind in DecoderKind], default=DecoderKind.DIAL.value
    )
    parser.add_argument("--seed", type=int, default=settings.SEED)
    parser.add_argument("--workers", type=int, default=settings.WORKERS)
    parser.add_argument("--block-frames", type=int, default=settings.BLOCK_FRAMES)
    parser.add_argument("--noiseless", action="store_true", help="Skip the channel (sanity check)")
    parser.add_argument("--out", type=Path, help="Results CSV (default: stdout)")
    parser.set_defaults(func=run)


def run(args: argparse.Namespace) -> int:
    job = SimJob(
        code=code_source_from_args(args),
        ab=args.ab,
        snr_points=parse_snr_range(args.snr),
        min_frame_errors=args.min_errors,
        max_frames=args.max_frames,
        clock_mhz=args.clock_mhz,
        decoder=DecoderKind(args.decoder),
        seed=args.seed,
        workers=args.workers,
        block_frames=args.block_frames,
        noiseless=args.noiseless,
    )
    stats = run_sweep(job)

    if args.out is not None:
        emit_csv(stats, args.out)
    else:
        sys.stdout.write(",".join(CSV_COLUMNS) + "\n")
        for point in stats:
            sys.stdout.write(",".join(point.csv_row()) + "\n")

    if any(point.disagreements for point in stats):
        logger.error("Dial engine and reference decoder disagreed; see log for details")
        return 1
    return 0
