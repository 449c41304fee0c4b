# Monte Carlo sweeps: FER, average queries, modeled latency and throughput per SNR point
import csv
import logging
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np

from grandab.models.decoding import DecodeResult, GrandConfig
from grandab.models.simulation import (
    CSV_COLUMNS,
    ChannelConfig,
    CodeSource,
    DecoderKind,
    SimJob,
    SimStats,
)
from grandab.services.channel import make_rng, transmit_hard
from grandab.services.code_cache import load_code
from grandab.services.codes import LinearCode, encode, is_codeword
from grandab.services.decoders import dial_engine
from grandab.services.decoders.reference import (
    count_max_queries,
    grandab_decode,
    pattern_query_index,
)
from grandab.services.gf2 import BitVector
from grandab.utils.errors import ConfigurationError

logger = logging.getLogger(__name__)

# Stream ids are point * STREAMS_PER_POINT + block, so blocks never share a substream
STREAMS_PER_POINT = 2**32


def throughput(k: int, cycles: float, clock_mhz: float) -> float:
    """
    Modeled information throughput in Mbps: k bits per ``cycles`` clock cycles

    Raises:
        ConfigurationError: If cycles < 1
    """
    if cycles < 1:
        raise ConfigurationError(f"latency must be at least one cycle, got {cycles}")
    return k * clock_mhz / cycles


def latency_ns(cycles: float, clock_mhz: float) -> float:
    return cycles * 1000.0 / clock_mhz


@dataclass
class BlockTally:
    """Order-independent sums over a block of frames"""

    frames: int = 0
    frame_errors: int = 0
    queries: int = 0
    checks: int = 0
    latency_cycles: int = 0
    disagreements: int = 0
    flipped_bits: int = 0

    def __add__(self, other: "BlockTally") -> "BlockTally":
        sums = {f.name: getattr(self, f.name) + getattr(other, f.name) for f in fields(self)}
        return BlockTally(**sums)


def serial_queries(code: LinearCode, result: DecodeResult, ab: int) -> int:
    """Queries the serial decoder spends to reach the same pattern (or to abandon)"""
    if result.decoded:
        return pattern_query_index(code.n, result.flipped)
    return 1 + count_max_queries(code.n, ab)


def _results_agree(code: LinearCode, dial: DecodeResult, ref: DecodeResult) -> bool:
    if dial.status != ref.status or dial.weight != ref.weight:
        return False
    return all(is_codeword(code, r.codeword) for r in (dial, ref) if r.decoded)


def simulate_block(
    source: CodeSource,
    ab: int,
    decoder: DecoderKind,
    channel: ChannelConfig,
    frames: int,
) -> BlockTally:
    """
    Simulate ``frames`` frames on one RNG substream

    Runs in worker processes, so it takes only picklable arguments and fetches the code from the
    per-process cache.
    """
    code = load_code(source)
    cfg = GrandConfig(ab=ab)
    rng = make_rng(channel.seed, channel.stream_id)
    tally = BlockTally()

    for _ in range(frames):
        message = BitVector.from_bits(rng.integers(0, 2, code.k, dtype=np.uint8))
        codeword = encode(code, message)
        received = transmit_hard(codeword, channel, rng)
        tally.flipped_bits += (received ^ codeword).weight()

        dial: Optional[DecodeResult] = None
        ref: Optional[DecodeResult] = None
        if decoder in (DecoderKind.DIAL, DecoderKind.BOTH):
            dial = dial_engine.decode(code, received, cfg)
        if decoder in (DecoderKind.REF, DecoderKind.BOTH):
            ref = grandab_decode(code, received, cfg)

        primary = dial if dial is not None else ref
        tally.frames += 1
        if not primary.decoded or primary.message != message:
            tally.frame_errors += 1

        if dial is not None:
            tally.checks += dial.queries
            tally.latency_cycles += dial.latency_cycles
        tally.queries += ref.queries if ref is not None else serial_queries(code, dial, ab)

        if dial is not None and ref is not None and not _results_agree(code, dial, ref):
            tally.disagreements += 1
            logger.error(
                f"Decoder disagreement at stream {channel.stream_id}: "
                f"dial {dial.status.value}/{dial.flipped} vs "
                f"reference {ref.status.value}/{ref.flipped}"
            )

    logger.debug(
        f"Block {channel.stream_id}: {tally.frame_errors}/{tally.frames} frame errors at "
        f"{channel.snr_db} dB"
    )
    return tally


def _block_sizes(job: SimJob) -> List[int]:
    full, rest = divmod(job.max_frames, job.block_frames)
    return [job.block_frames] * full + ([rest] if rest else [])


def _run_point(job: SimJob, point: int, snr_db: float, executor: Optional[Executor]) -> BlockTally:
    """
    Consume blocks in index order until the stopping rule holds

    Blocks are dispatched in waves of one per worker, but only the prefix up to the stopping
    block is counted, so the result does not depend on the number of workers.
    """
    sizes = _block_sizes(job)
    wave = job.workers if executor is not None else 1
    total = BlockTally()
    block = 0

    while block < len(sizes):
        batch = range(block, min(block + wave, len(sizes)))
        args = [
            (
                job.code,
                job.ab,
                job.decoder,
                ChannelConfig(
                    snr_db=snr_db,
                    seed=job.seed,
                    stream_id=point * STREAMS_PER_POINT + b,
                    noiseless=job.noiseless,
                ),
                sizes[b],
            )
            for b in batch
        ]
        if executor is None:
            results = [simulate_block(*a) for a in args]
        else:
            results = list(executor.map(simulate_block, *zip(*args)))

        for result in results:
            total = total + result
            block += 1
            if total.frame_errors >= job.min_frame_errors:
                return total
    return total


def _summarize(job: SimJob, code: LinearCode, snr_db: float, tally: BlockTally) -> SimStats:
    wc_cycles = dial_engine.worst_case_cycles(code.n, job.ab)
    has_latency = job.decoder is not DecoderKind.REF
    avg_latency = tally.latency_cycles / tally.frames if has_latency else None
    stats = SimStats(
        snr_db=snr_db,
        frames=tally.frames,
        frame_errors=tally.frame_errors,
        fer=tally.frame_errors / tally.frames,
        avg_queries=tally.queries / tally.frames,
        avg_latency_cycles=avg_latency,
        wc_latency_cycles=wc_cycles,
        avg_info_tput_mbps=throughput(code.k, avg_latency, job.clock_mhz) if has_latency else None,
        wc_info_tput_mbps=throughput(code.k, wc_cycles, job.clock_mhz),
        low_confidence=tally.frame_errors < job.min_frame_errors,
        disagreements=tally.disagreements,
        avg_checks=tally.checks / tally.frames if has_latency else None,
        raw_flip_rate=tally.flipped_bits / (tally.frames * code.n),
    )
    if stats.low_confidence and not job.noiseless:
        logger.warning(
            f"SNR {snr_db} dB: only {tally.frame_errors} frame errors in {tally.frames} frames "
            f"(wanted {job.min_frame_errors}); point is low-confidence"
        )
    return stats


def run_sweep(job: SimJob) -> List[SimStats]:
    """
    Run the Monte Carlo sweep described by ``job``

    Per frame: draw a random message, encode, transmit, decode, and count a frame error when the
    decoder abandons or returns the wrong message.

    Returns:
        One SimStats per SNR point, in job order

    Raises:
        CodeConstructionError: If the code cannot be built
    """
    code = load_code(job.code)
    logger.info(
        f"Sweeping {code!r} with AB={job.ab}, decoder={job.decoder.value}, "
        f"{len(job.snr_points)} SNR points, {job.workers} worker(s)"
    )

    executor = ProcessPoolExecutor(max_workers=job.workers) if job.workers > 1 else None
    results: List[SimStats] = []
    try:
        for point, snr_db in enumerate(job.snr_points):
            tally = _run_point(job, point, snr_db, executor)
            stats = _summarize(job, code, snr_db, tally)
            results.append(stats)
            latency = (
                f"{stats.avg_latency_cycles:.3f}" if stats.avg_latency_cycles is not None else "-"
            )
            logger.info(
                f"✓ SNR {snr_db:.2f} dB: FER={stats.fer:.3e} "
                f"({stats.frame_errors}/{stats.frames}), "
                f"avg queries {stats.avg_queries:.2f}, avg latency {latency} cycles"
            )
            if stats.disagreements:
                logger.error(f"SNR {snr_db:.2f} dB: {stats.disagreements} decoder disagreement(s)")
    finally:
        if executor is not None:
            executor.shutdown()
    return results


def emit_csv(stats: Sequence[SimStats], path: Union[str, Path]) -> Path:
    """
    Write one header row and one row per SNR point

    Raises:
        OSError: If the file cannot be written
    """
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for point in stats:
            writer.writerow(point.csv_row())
    logger.info(f"Wrote {len(stats)} SNR point(s) to {path}")
    return path
