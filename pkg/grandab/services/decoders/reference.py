# Serial GRANDAB oracle: weight classes in increasing order, lexicographic within a class
import logging
from itertools import chain, combinations
from math import comb
from threading import Lock
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np
from cachetools import LRUCache, cached

from grandab.models.decoding import DecodeResult, DecodeStatus, GrandConfig
from grandab.services.codes import LinearCode, correct_word, syndrome
from grandab.services.decoders.lanes import base_syndrome, first_match, pattern_syndromes
from grandab.services.gf2 import BitVector
from grandab.utils.errors import ConfigurationError, DimensionError

logger = logging.getLogger(__name__)

# Weight classes larger than this are walked serially instead of held as an array
VECTOR_LANE_LIMIT = 1 << 20


def enumerate_patterns(n: int, w: int) -> Iterator[Tuple[int, ...]]:
    """
    All weight-w error patterns of length n as strictly increasing 1-based index tuples

    Yields C(n, w) tuples in lexicographic order; w = 0 yields the single empty tuple.
    """
    if not 0 <= w <= n:
        raise ConfigurationError(f"pattern weight must lie in [0..{n}], got {w}")
    return combinations(range(1, n + 1), w)


def count_max_queries(n: int, t: int) -> int:
    """Maximum GRANDAB queries for weights 1..t: sum of C(n, i)"""
    if not 0 <= t <= n:
        raise ConfigurationError(f"abandonment weight must lie in [0..{n}], got {t}")
    return sum(comb(n, i) for i in range(1, t + 1))


def pattern_query_index(n: int, flipped: Sequence[int]) -> int:
    """
    1-based position of a pattern in the global enumeration order

    The weight-0 check is query 1; a weight-w pattern comes after every lighter pattern and
    after the lexicographically smaller patterns of its own weight.
    """
    w = len(flipped)
    index = sum(comb(n, i) for i in range(w)) + 1
    previous = 0
    for slot, position in enumerate(flipped, start=1):
        if not previous < position <= n:
            raise DimensionError(f"pattern {tuple(flipped)} is not strictly increasing in [1..{n}]")
        for skipped in range(previous + 1, position):
            index += comb(n - skipped, w - slot)
        previous = position
    return index


@cached(cache=LRUCache(maxsize=32), lock=Lock())
def lexicographic_patterns(n: int, w: int) -> np.ndarray:
    """enumerate_patterns(n, w) as a (C(n, w), w) array of 1-based positions"""
    if w == 0:
        return np.zeros((1, 0), dtype=np.int32)
    count = comb(n, w)
    flat = np.fromiter(
        chain.from_iterable(enumerate_patterns(n, w)), dtype=np.int32, count=count * w
    )
    patterns = flat.reshape(count, w)
    patterns.flags.writeable = False
    return patterns


def _scan_serial(code: LinearCode, base: int, weight: int) -> Tuple[Optional[Tuple[int, ...]], int]:
    """(winning pattern, its rank within the class) or (None, class size)"""
    columns = code.syndrome_ints
    rank = 0
    for pattern in combinations(range(code.n), weight):
        candidate = base
        for position in pattern:
            candidate ^= columns[position]
        if candidate == 0:
            return tuple(position + 1 for position in pattern), rank
        rank += 1
    return None, rank


def _scan_class(
    code: LinearCode, received: BitVector, base: np.ndarray, weight: int
) -> Tuple[Optional[Tuple[int, ...]], int]:
    if comb(code.n, weight) > VECTOR_LANE_LIMIT:
        return _scan_serial(code, syndrome(code, received).to_int(), weight)
    patterns = lexicographic_patterns(code.n, weight)
    values = pattern_syndromes(code, ("lexicographic", weight), patterns)
    lane = first_match(values, base)
    if lane is None:
        return None, len(patterns)
    return tuple(int(i) for i in patterns[lane]), lane


def grandab_decode(code: LinearCode, received: BitVector, cfg: GrandConfig) -> DecodeResult:
    """
    Decode ``received`` by testing r ⊕ e for every pattern of weight 0..ab in order

    Each candidate's syndrome is s(r) XORed with the column syndromes of its flips, which is
    H·(r ⊕ e)ᵀ by linearity. The first zero syndrome wins. A weight class is compared in one
    array operation unless it has more than VECTOR_LANE_LIMIT patterns, in which case it is
    walked one pattern at a time.

    Args:
        code: The code
        received: Hard-decision word of length n
        cfg: Abandonment weight

    Returns:
        DecodeResult with ``queries`` equal to the winning pattern's position in the
        enumeration order, or 1 + count_max_queries(n, ab) on abandonment

    Raises:
        DimensionError: If len(received) != n
    """
    if len(received) != code.n:
        raise DimensionError(f"received word has {len(received)} bits, code expects n={code.n}")
    if cfg.ab > code.n:
        raise ConfigurationError(f"ab={cfg.ab} exceeds the code length n={code.n}")

    base = base_syndrome(code, received)
    queries = 0
    for weight in range(cfg.ab + 1):
        flipped, rank = _scan_class(code, received, base, weight)
        if flipped is not None:
            codeword, message = correct_word(code, received, flipped)
            return DecodeResult(
                status=DecodeStatus.DECODED,
                codeword=codeword,
                message=message,
                flipped=flipped,
                weight=weight,
                queries=queries + rank + 1,
            )
        queries += rank

    logger.debug(f"Reference decoder abandoned after {queries} queries")
    return DecodeResult(status=DecodeStatus.ABANDONED, queries=queries)
