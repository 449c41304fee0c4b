# Tests for the cycle-accurate dial architecture model
import io
from collections import Counter

import numpy as np
import pytest

from grandab.models.decoding import DecodeStatus, GrandConfig, Phase
from grandab.models.simulation import ChannelConfig, CodeSource, CrcSpec
from grandab.services.channel import make_rng, transmit_hard
from grandab.services.code_cache import load_code
from grandab.services.codes import crc_code, encode, is_codeword
from grandab.services.decoders import dial_engine
from grandab.services.decoders.reference import (
    count_max_queries,
    enumerate_patterns,
    grandab_decode,
)
from grandab.services.gf2 import BitVector
from grandab.utils.errors import ConfigurationError, DecoderStateError, DimensionError


def test_worst_case_cycles():
    """Closed-form schedule lengths"""
    assert dial_engine.worst_case_cycles(128, 3) == 4098
    assert dial_engine.worst_case_cycles(79, 2) == 41
    assert dial_engine.worst_case_cycles(4, 3) == 6
    assert dial_engine.worst_case_cycles(50, 1) == 2


def test_worst_case_cycles_unsupported_ab():
    """Only weights 1..3 have a dial schedule"""
    with pytest.raises(ConfigurationError):
        dial_engine.worst_case_cycles(8, 4)


@pytest.mark.parametrize("n,ab", [(4, 3), (8, 3), (12, 3), (79, 2), (16, 1), (2, 3)])
def test_schedule_length_matches_worst_case(n, ab):
    """Stepping a blank state to completion takes exactly worst_case_cycles"""
    assert sum(1 for _ in dial_engine.iter_schedule(n, ab)) == dial_engine.worst_case_cycles(n, ab)


def test_parallelization_factor():
    """349632 / 4098 lies within 0.1 of 2n/3"""
    factor = dial_engine.parallelization_factor(128, 3)
    assert factor == pytest.approx(349632 / 4098)
    assert abs(factor - 2 * 128 / 3) < 0.1


@pytest.mark.parametrize("n", [8, 12, 16, 32])
def test_schedule_covers_every_pattern(n):
    """Every pattern of weight <= 3 is checked, nothing heavier, each at most twice"""
    seen = Counter()
    duplicate_sites = {}
    total = 0
    for report in dial_engine.iter_schedule(n, 3):
        assert report.count <= n
        active = n - report.controller if report.phase is Phase.WEIGHT3 else n
        for pattern in report.tuples():
            seen[pattern] += 1
            total += 1
            if seen[pattern] == 2:
                duplicate_sites[pattern] = (report.phase, report.offset, active)

    expected = {p for w in range(4) for p in enumerate_patterns(n, w)}
    assert set(seen) == expected
    assert max(seen.values()) <= 2
    assert total >= 1 + count_max_queries(n, 3)
    for phase, offset, active in duplicate_sites.values():
        assert phase in (Phase.WEIGHT2, Phase.WEIGHT3)
        assert active % 2 == 0 and offset == active // 2


def test_weight2_first_cycle_pairs_neighbours():
    """n = 8: the first pair cycle checks (i, i mod 8 + 1)"""
    reports = list(dial_engine.iter_schedule(8, 3))
    first = reports[2]
    assert first.phase is Phase.WEIGHT2
    assert first.offset == 1
    assert first.tuples() == [tuple(sorted((i, i % 8 + 1))) for i in range(1, 9)]


def test_weight3_first_cycle_uses_controller():
    """n = 8, controller at 1: seven checks of the form (1, i, j)"""
    reports = list(dial_engine.iter_schedule(8, 3))
    first = reports[1 + 1 + 8 // 2]
    assert first.phase is Phase.WEIGHT3
    assert first.controller == 1
    assert first.count == 7
    assert all(t[0] == 1 and len(set(t)) == 3 for t in first.tuples())


def test_dial_state_invariants():
    """Dial 2 leads dial 1 by shift_count + 1; weight-3 dials hold s_(c+1)..s_n"""
    n = 12
    state = dial_engine.blank_state(n, 3)
    while state.phase is not Phase.DONE:
        if state.phase is Phase.WEIGHT2:
            assert state.dial2.rotation == state.shift_count + 1
        if state.phase is Phase.WEIGHT3:
            c = state.controller_pos
            assert state.dial1.active == state.dial2.active == n - c
            _, indices = state.dial1.rows()
            assert list(indices) == list(range(c + 1, n + 1))
        dial_engine.step(state)
    assert state.time_step == dial_engine.worst_case_cycles(n, 3)


def test_init_loads_column_syndromes(hamming_code):
    """Dials start with s_1..s_n top to bottom"""
    state = dial_engine.init(hamming_code, BitVector.zeros(7))
    rows, indices = state.dial1.rows()
    assert list(indices) == list(range(1, 8))
    assert np.array_equal(rows, hamming_code.syndrome_table())
    assert state.phase is Phase.WEIGHT0
    assert state.time_step == 0


def test_init_base_syndrome(hamming_code):
    """Base syndrome is zero for a codeword and s_3 after flipping position 3"""
    c = encode(hamming_code, BitVector.from_bits([1, 1, 0, 1]))
    assert int(dial_engine.init(hamming_code, c).base_syndrome) == 0
    state = dial_engine.init(hamming_code, c.flip([3]))
    assert int(state.base_syndrome) == int(hamming_code.syndrome_table()[2])


def test_init_length_mismatch(hamming_code):
    """r must have n bits"""
    with pytest.raises(DimensionError):
        dial_engine.init(hamming_code, BitVector.zeros(6))


def test_zero_error_first_step_hits(hamming_code):
    """A codeword hits with the empty pattern in the first cycle"""
    state = dial_engine.init(hamming_code, BitVector.zeros(7))
    report = dial_engine.step(state)
    assert report.hit == ()
    assert report.hit_lane == 0


def test_step_after_done(hamming_code):
    """A finished schedule cannot be stepped"""
    state = dial_engine.init(hamming_code, BitVector.zeros(7), ab=1)
    dial_engine.step(state)
    dial_engine.step(state)
    assert state.phase is Phase.DONE
    with pytest.raises(DecoderStateError):
        dial_engine.step(state)


def test_shift_up_on_rotated_dial():
    """The controller only shifts up an unrotated dial"""
    dial = dial_engine.Dial(np.arange(4, dtype=np.uint64), np.arange(1, 5))
    dial.shift(1)
    with pytest.raises(DecoderStateError):
        dial.shift_up(1)


def test_decode_codeword_takes_one_cycle(hamming_code):
    """Best case latency is one cycle"""
    c = encode(hamming_code, BitVector.from_bits([1, 0, 0, 1]))
    result = dial_engine.decode(hamming_code, c, GrandConfig(ab=3))
    assert result.latency_cycles == 1
    assert result.weight == 0
    assert result.queries == 1
    assert result.message == BitVector.from_bits([1, 0, 0, 1])


def test_decode_single_flips_take_two_cycles(hamming_code):
    """Every single flip is found in the weight-1 cycle"""
    c = encode(hamming_code, BitVector.from_bits([0, 1, 1, 1]))
    for i in range(1, 8):
        result = dial_engine.decode(hamming_code, c.flip([i]), GrandConfig(ab=1))
        assert result.latency_cycles == 2
        assert result.flipped == (i,)
        assert result.codeword == c
        assert result.queries == 1 + 7


def test_decode_abandons_with_worst_case_latency(repetition_7):
    """Abandonment reports the full schedule length"""
    r = BitVector.from_bits([1, 1, 1, 0, 0, 0, 0])
    result = dial_engine.decode(repetition_7, r, GrandConfig(ab=2))
    assert result.status is DecodeStatus.ABANDONED
    assert result.latency_cycles == dial_engine.worst_case_cycles(7, 2)
    assert result.queries == 1 + 7 + 7 * (7 // 2)


def test_decode_finds_weight_three(repetition_7):
    """Three flips are found by the controller phase"""
    r = BitVector.from_bits([1, 1, 1, 0, 0, 0, 0])
    result = dial_engine.decode(repetition_7, r, GrandConfig(ab=3))
    assert result.flipped == (1, 2, 3)
    assert result.codeword.is_zero()
    assert 2 + 7 // 2 < result.latency_cycles <= dial_engine.worst_case_cycles(7, 3)


def test_decode_abandons_at_length_128():
    """A word 64 flips from every codeword runs all 4098 cycles"""
    code = crc_code(CrcSpec(n=128, k=1, poly=(1 << 127) - 1))
    r = BitVector.from_positions(128, range(1, 65))
    result = dial_engine.decode(code, r, GrandConfig(ab=3))
    assert result.status is DecodeStatus.ABANDONED
    assert result.latency_cycles == 4098


def test_trace_lines(hamming_code):
    """Golden trace for a single flip at position 5"""
    trace = io.StringIO()
    dial_engine.decode(hamming_code, BitVector.from_positions(7, [5]), GrandConfig(ab=1), trace)
    assert trace.getvalue().splitlines() == [
        "cycle=1 phase=weight0 controller=- offset=0 checks=1 hit=-",
        "cycle=2 phase=weight1 controller=- offset=0 checks=7 hit=(5)",
    ]


@pytest.mark.parametrize("ab", [1, 2, 3])
def test_matches_reference_decoder(crc_16_8, rng, ab):
    """Same status and weight as the serial decoder; both outputs are codewords"""
    cfg = GrandConfig(ab=ab)
    for _ in range(200):
        r = BitVector.from_bits(rng.integers(0, 2, 16, dtype=np.uint8))
        dial = dial_engine.decode(crc_16_8, r, cfg)
        ref = grandab_decode(crc_16_8, r, cfg)
        assert dial.status == ref.status
        assert dial.weight == ref.weight
        if dial.decoded:
            assert is_codeword(crc_16_8, dial.codeword)
            assert is_codeword(crc_16_8, ref.codeword)


@pytest.mark.slow
def test_matches_reference_decoder_crc_128_104(rng):
    """Random codewords of the (128,104) CRC code with three random flips"""
    code = crc_code(CrcSpec(n=128, k=104, poly=0xB2B117))
    cfg = GrandConfig(ab=3)
    for _ in range(200):
        u = BitVector.from_bits(rng.integers(0, 2, 104, dtype=np.uint8))
        flips = rng.choice(np.arange(1, 129), size=3, replace=False)
        r = encode(code, u).flip(int(i) for i in flips)
        dial = dial_engine.decode(code, r, cfg)
        ref = grandab_decode(code, r, cfg)
        assert dial.status == ref.status == DecodeStatus.DECODED
        assert dial.weight == ref.weight
        assert is_codeword(code, dial.codeword)


def _decode_both_ways(code, r, ab):
    fast = dial_engine.decode(code, r, GrandConfig(ab=ab))
    stepped = dial_engine.decode(code, r, GrandConfig(ab=ab), trace=io.StringIO())
    return fast, stepped


@pytest.mark.parametrize("ab", [1, 2, 3])
def test_compiled_decode_matches_stepping(crc_16_8, rng, ab):
    """The array path reports the lane, cycle and check count that stepping reports"""
    c = encode(crc_16_8, BitVector.from_bits(rng.integers(0, 2, 8, dtype=np.uint8)))
    words = [BitVector.from_bits(rng.integers(0, 2, 16, dtype=np.uint8)) for _ in range(100)]
    words += [
        c.flip(int(i) for i in rng.choice(np.arange(1, 17), size=w, replace=False))
        for w in (0, 1, 2, 3)
        for _ in range(10)
    ]
    for r in words:
        fast, stepped = _decode_both_ways(crc_16_8, r, ab)
        assert fast == stepped


def test_compiled_decode_matches_stepping_wide_syndromes():
    """Syndromes wider than one word take the same path"""
    code = crc_code(CrcSpec(n=80, k=1, poly=(1 << 79) - 1))
    r = BitVector.from_positions(80, [3, 40, 77])
    fast, stepped = _decode_both_ways(code, r, 3)
    assert fast == stepped
    assert fast.flipped == (3, 40, 77)


def test_compiled_schedule_totals():
    """Lanes, cycles and checks of the flattened schedule"""
    plans = dial_engine.compiled_schedule(12, 3)
    assert [plan.phase for plan in plans] == [
        Phase.WEIGHT0,
        Phase.WEIGHT1,
        Phase.WEIGHT2,
        Phase.WEIGHT3,
    ]
    lanes = sum(len(plan.patterns) for plan in plans)
    assert plans[-1].checks[-1] == lanes
    assert plans[-1].cycles[-1] == dial_engine.worst_case_cycles(12, 3)
    for plan in plans:
        assert np.all(np.diff(plan.cycles) >= 0)


@pytest.mark.slow
@pytest.mark.parametrize(
    "crc",
    [None, CrcSpec(n=128, k=120, poly=0xD5), CrcSpec(n=128, k=104, poly=0xB2B117)],
    ids=["hamming-hfile", "crc-128-120", "crc-128-104"],
)
def test_channel_frames_match_reference_decoder(hamming_file, crc):
    """10^4 channel frames at 6-10 dB: same status and weight, decoded words are codewords"""
    code = load_code(CodeSource(hfile=hamming_file) if crc is None else CodeSource(crc=crc))
    cfg = GrandConfig(ab=3)
    for point, snr_db in enumerate((6.0, 7.0, 8.0, 9.0, 10.0)):
        channel = ChannelConfig(snr_db=snr_db, seed=2021, stream_id=point)
        rng = make_rng(channel.seed, channel.stream_id)
        for _ in range(2000):
            u = BitVector.from_bits(rng.integers(0, 2, code.k, dtype=np.uint8))
            r = transmit_hard(encode(code, u), channel, rng)
            dial = dial_engine.decode(code, r, cfg)
            ref = grandab_decode(code, r, cfg)
            assert dial.status == ref.status
            assert dial.weight == ref.weight
            if dial.decoded:
                assert is_codeword(code, dial.codeword)
                assert is_codeword(code, ref.codeword)
