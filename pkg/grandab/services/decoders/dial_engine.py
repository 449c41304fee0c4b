# Cycle-accurate model of the dial-based GRANDAB architecture
#
# Two dials (syndrome register files with companion index dials), a controller that supplies the
# first flip of weight-3 patterns, n parallel XOR/NOR-reduce lanes, a priority encoder and a word
# generator. One call to step() is one clock cycle.

import logging
from dataclasses import dataclass
from threading import Lock
from typing import IO, Iterator, List, Optional, Tuple

import numpy as np
from cachetools import LRUCache, cached

from grandab.models.decoding import DecodeResult, DecodeStatus, GrandConfig, Phase
from grandab.services.codes import LinearCode, correct_word
from grandab.services.decoders.lanes import base_syndrome, first_match, pattern_syndromes
from grandab.services.decoders.reference import count_max_queries
from grandab.services.gf2 import BitVector
from grandab.utils.errors import ConfigurationError, DecoderStateError, DimensionError

logger = logging.getLogger(__name__)

SUPPORTED_AB = (1, 2, 3)


def _check_ab(ab: int) -> None:
    if ab not in SUPPORTED_AB:
        raise ConfigurationError(f"the dial architecture supports ab in {SUPPORTED_AB}, got {ab}")


def worst_case_cycles(n: int, ab: int) -> int:
    """
    Time steps needed to exhaust every pattern of weight <= ab

    One cycle for the weight-0 check, one for all n single flips, floor(n/2) for the pairs and
    floor(i/2) per controller position for the triples: 2 + sum_{i=2..n} floor(i/2) when ab = 3.
    """
    _check_ab(ab)
    if ab == 1:
        return 2
    if ab == 2:
        return 2 + n // 2
    return 2 + sum(i // 2 for i in range(2, n + 1))


def parallelization_factor(n: int, ab: int) -> float:
    """Queries per time step of a full schedule"""
    return count_max_queries(n, ab) / worst_case_cycles(n, ab)


class Dial:
    """
    n×(n-k) cyclic register file and its index dial

    Modeled as an active window over the rows loaded at reset plus a rotation, so shifts are O(1).
    Physical row m holds window[(m + rotation) mod active]; rows past ``active`` are null.
    """

    def __init__(self, syndromes: np.ndarray, indices: np.ndarray):
        self._syndromes = syndromes
        self._indices = indices
        self._size = len(indices)
        self._start = 0
        self._rotation = 0

    @property
    def active(self) -> int:
        return self._size - self._start

    @property
    def rotation(self) -> int:
        return self._rotation

    def reset(self) -> None:
        """Reload s_1..s_n top to bottom"""
        self._start = 0
        self._rotation = 0

    def shift(self, by: int = 1) -> None:
        """Cyclic shift of the non-null rows: row m takes the content of row m+1"""
        if self.active:
            self._rotation = (self._rotation + by) % self.active

    def shift_up(self, by: int = 1) -> None:
        """Shift rows up, nulling the last row each time; the controller only does this unrotated"""
        if self._rotation:
            raise DecoderStateError("shift-up on a rotated dial is not part of the schedule")
        if by > self.active:
            raise DecoderStateError(f"cannot shift up by {by} with {self.active} active rows")
        self._start += by

    def rows(self) -> Tuple[np.ndarray, np.ndarray]:
        """Syndromes and indices of the active rows in physical order"""
        window = slice(self._start, None)
        return (
            np.roll(self._syndromes[window], -self._rotation, axis=0),
            np.roll(self._indices[window], -self._rotation),
        )


@dataclass
class DialState:
    """Architecture state between cycles; ``time_step`` counts completed cycles"""

    n: int
    ab: int
    table: np.ndarray
    base_syndrome: np.ndarray
    dial1: Dial
    dial2: Dial
    phase: Phase = Phase.WEIGHT0
    time_step: int = 0
    controller_pos: int = 0
    shift_count: int = 0
    checks_emitted: int = 0

    @property
    def offset(self) -> int:
        """Cyclic offset of dial 2 relative to dial 1 for the current cycle"""
        return self.dial2.rotation if self.phase in (Phase.WEIGHT2, Phase.WEIGHT3) else 0


@dataclass
class CycleReport:
    """
    Checks evaluated in one cycle

    ``patterns`` holds the 1-based flip indices of each lane in physical row order (controller,
    dial 1, dial 2 columns as applicable); ``syndromes`` the matching test syndromes.
    """

    time_step: int
    phase: Phase
    controller: int
    offset: int
    patterns: np.ndarray
    syndromes: np.ndarray
    hit: Optional[Tuple[int, ...]] = None
    hit_lane: Optional[int] = None

    @property
    def count(self) -> int:
        return len(self.patterns)

    def tuples(self) -> List[Tuple[int, ...]]:
        """Index tuples of every lane, each sorted ascending"""
        return [tuple(sorted(int(i) for i in row)) for row in self.patterns]

    @property
    def checks(self) -> List[Tuple[Tuple[int, ...], int]]:
        """(index tuple, syndrome as an integer) per lane"""
        words = self.syndromes.reshape(self.count, -1)
        values = [sum(int(w) << (64 * j) for j, w in enumerate(row)) for row in words]
        return list(zip(self.tuples(), values))

    def trace_line(self) -> str:
        hit = "-" if self.hit is None else "(" + ",".join(str(i) for i in self.hit) + ")"
        controller = str(self.controller) if self.controller else "-"
        return (
            f"cycle={self.time_step} phase={self.phase.value} controller={controller} "
            f"offset={self.offset} checks={self.count} hit={hit}"
        )


def _zero_lanes(lanes: np.ndarray) -> np.ndarray:
    """NOR-reduce: True where the whole test syndrome is zero"""
    if lanes.ndim == 1:
        return lanes == 0
    return ~lanes.any(axis=1)


def _new_state(table: np.ndarray, base: np.ndarray, ab: int) -> DialState:
    n = len(table)
    indices = np.arange(1, n + 1)
    return DialState(
        n=n,
        ab=ab,
        table=table,
        base_syndrome=base,
        dial1=Dial(table, indices),
        dial2=Dial(table, indices),
    )


def init(code: LinearCode, received: BitVector, ab: int = 3) -> DialState:
    """
    Compute H·rᵀ and load both dials with s_1..s_n

    Raises:
        DimensionError: If len(received) != n
        ConfigurationError: If ab is not supported by the architecture
    """
    if len(received) != code.n:
        raise DimensionError(f"received word has {len(received)} bits, code expects n={code.n}")
    _check_ab(ab)
    return _new_state(code.syndrome_table(), base_syndrome(code, received), ab)


def blank_state(n: int, ab: int = 3) -> DialState:
    """State for walking the schedule alone: zero column syndromes and a nonzero base never hit"""
    _check_ab(ab)
    return _new_state(np.zeros(n, dtype=np.uint64), np.uint64(1), ab)


def _enter_weight3(state: DialState, controller: int) -> None:
    state.phase = Phase.WEIGHT3
    state.controller_pos = controller
    state.shift_count = 0
    state.dial1.shift_up(1)
    state.dial2.reset()
    state.dial2.shift_up(controller)
    state.dial2.shift(1)


def _advance(state: DialState) -> None:
    """Controller scheduling after a completed cycle"""
    n = state.n
    if state.phase is Phase.WEIGHT0:
        state.phase = Phase.WEIGHT1
    elif state.phase is Phase.WEIGHT1:
        if state.ab >= 2:
            state.phase = Phase.WEIGHT2
            state.shift_count = 0
            state.dial2.shift(1)
        else:
            state.phase = Phase.DONE
    elif state.phase is Phase.WEIGHT2:
        if state.shift_count + 1 < n // 2:
            state.shift_count += 1
            state.dial2.shift(1)
        elif state.ab >= 3 and n >= 3:
            _enter_weight3(state, 1)
        else:
            state.phase = Phase.DONE
    elif state.phase is Phase.WEIGHT3:
        active = n - state.controller_pos
        if state.shift_count + 1 < active // 2:
            state.shift_count += 1
            state.dial2.shift(1)
        elif state.controller_pos + 1 <= n - 2:
            _enter_weight3(state, state.controller_pos + 1)
        else:
            state.phase = Phase.DONE

    if state.phase is Phase.DONE:
        state.controller_pos = 0
        state.shift_count = 0


def step(state: DialState) -> CycleReport:
    """
    Run one time step: form the test syndromes, NOR-reduce them and priority-encode the hits

    Raises:
        DecoderStateError: If the schedule is already exhausted
    """
    if state.phase is Phase.DONE:
        raise DecoderStateError("cannot step a finished dial schedule")

    state.time_step += 1
    phase = state.phase
    base = state.base_syndrome
    controller = state.controller_pos if phase is Phase.WEIGHT3 else 0
    offset = state.offset

    if phase is Phase.WEIGHT0:
        syndromes = np.asarray(base)[np.newaxis]
        patterns = np.zeros((1, 0), dtype=np.int64)
    elif phase is Phase.WEIGHT1:
        rows1, idx1 = state.dial1.rows()
        syndromes = base ^ rows1
        patterns = idx1[:, np.newaxis]
    else:
        rows1, idx1 = state.dial1.rows()
        rows2, idx2 = state.dial2.rows()
        if phase is Phase.WEIGHT2:
            syndromes = base ^ rows1 ^ rows2
            patterns = np.column_stack([idx1, idx2])
        else:
            syndromes = base ^ state.table[controller - 1] ^ rows1 ^ rows2
            patterns = np.column_stack([np.full_like(idx1, controller), idx1, idx2])

    report = CycleReport(
        time_step=state.time_step,
        phase=phase,
        controller=controller,
        offset=offset,
        patterns=patterns,
        syndromes=syndromes,
    )

    zero = _zero_lanes(syndromes)
    if zero.any():
        lane = int(np.argmax(zero))
        report.hit_lane = lane
        report.hit = tuple(sorted(int(i) for i in patterns[lane]))

    state.checks_emitted += len(patterns)
    _advance(state)
    return report


def iter_schedule(n: int, ab: int = 3) -> Iterator[CycleReport]:
    """Every cycle of a full run for length n, independent of any received word"""
    state = blank_state(n, ab)
    while state.phase is not Phase.DONE:
        yield step(state)


@dataclass(frozen=True)
class PhasePlan:
    """Every lane of one schedule phase, in cycle order and then physical row order"""

    phase: Phase
    patterns: np.ndarray
    cycles: np.ndarray
    checks: np.ndarray


@cached(cache=LRUCache(maxsize=16), lock=Lock())
def compiled_schedule(n: int, ab: int) -> Tuple[PhasePlan, ...]:
    """
    The full schedule for length n flattened into per-phase lane arrays

    ``checks[j]`` is the number of checks emitted through the end of lane j's cycle, which is what
    step() has counted when that cycle reports a hit.
    """
    groups = {}
    emitted = 0
    for report in iter_schedule(n, ab):
        emitted += report.count
        patterns, cycles, checks = groups.setdefault(report.phase, ([], [], []))
        patterns.append(report.patterns)
        cycles.append(np.full(report.count, report.time_step))
        checks.append(np.full(report.count, emitted))
    return tuple(
        PhasePlan(
            phase=phase,
            patterns=np.concatenate(patterns).astype(np.int32),
            cycles=np.concatenate(cycles),
            checks=np.concatenate(checks),
        )
        for phase, (patterns, cycles, checks) in groups.items()
    )


def _decoded(
    code: LinearCode, received: BitVector, hit: Tuple[int, ...], queries: int, latency: int
) -> DecodeResult:
    codeword, message = correct_word(code, received, hit)
    return DecodeResult(
        status=DecodeStatus.DECODED,
        codeword=codeword,
        message=message,
        flipped=hit,
        weight=len(hit),
        queries=queries,
        latency_cycles=latency,
    )


def _abandoned(n: int, ab: int, queries: int) -> DecodeResult:
    return DecodeResult(
        status=DecodeStatus.ABANDONED,
        queries=queries,
        latency_cycles=worst_case_cycles(n, ab),
    )


def _decode_stepwise(
    code: LinearCode, received: BitVector, cfg: GrandConfig, trace: IO[str]
) -> DecodeResult:
    state = init(code, received, cfg.ab)
    while state.phase is not Phase.DONE:
        report = step(state)
        trace.write(report.trace_line() + "\n")
        if report.hit is not None:
            return _decoded(code, received, report.hit, state.checks_emitted, report.time_step)

    logger.debug(f"Dial engine abandoned after {state.time_step} cycles")
    return _abandoned(code.n, cfg.ab, state.checks_emitted)


def decode(
    code: LinearCode, received: BitVector, cfg: GrandConfig, trace: Optional[IO[str]] = None
) -> DecodeResult:
    """
    Drive the architecture until a lane reports a zero syndrome or the schedule runs out

    Without a trace stream every lane of a phase is compared against s(r) in one array
    operation over the compiled schedule; the winning lane, its cycle and the checks counted
    through that cycle are the ones step() would report.

    Args:
        code: The code
        received: Hard-decision word r
        cfg: Abandonment weight (1, 2 or 3)
        trace: Optional text stream receiving one trace line per cycle

    Returns:
        DecodeResult with latency_cycles = the hit cycle, or worst_case_cycles(n, ab) when
        abandoned; queries counts every lane evaluated, duplicates included

    Raises:
        DimensionError: If len(received) != n
        ConfigurationError: If ab is not supported by the architecture
    """
    if trace is not None:
        return _decode_stepwise(code, received, cfg, trace)
    if len(received) != code.n:
        raise DimensionError(f"received word has {len(received)} bits, code expects n={code.n}")
    _check_ab(cfg.ab)

    base = base_syndrome(code, received)
    plans = compiled_schedule(code.n, cfg.ab)
    for plan in plans:
        values = pattern_syndromes(code, ("dial", cfg.ab, plan.phase.value), plan.patterns)
        lane = first_match(values, base)
        if lane is not None:
            hit = tuple(sorted(int(i) for i in plan.patterns[lane]))
            return _decoded(code, received, hit, int(plan.checks[lane]), int(plan.cycles[lane]))

    logger.debug(f"Dial engine abandoned after {worst_case_cycles(code.n, cfg.ab)} cycles")
    return _abandoned(code.n, cfg.ab, int(plans[-1].checks[-1]))
