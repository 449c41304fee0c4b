# Precomputed syndromes of fixed error-pattern lists, one table per (code, pattern list)
#
# A pattern's syndrome contribution XOR(s_i for i in e) does not depend on the received word, so
# a decoder compares s(r) against a whole table at once: lane j matches when its entry equals
# s(r), which is H·(r ⊕ e_j)ᵀ = 0.

import logging
from threading import Lock
from typing import Hashable, Optional

import numpy as np
from cachetools import LRUCache

from grandab.config.settings import settings
from grandab.services.codes import LinearCode, syndrome
from grandab.services.gf2 import BitVector

logger = logging.getLogger(__name__)

# Entries hold the code itself so an id() reused after garbage collection cannot alias
_tables: LRUCache = LRUCache(maxsize=4 * settings.CODE_CACHE_SIZE)
_lock = Lock()


def base_syndrome(code: LinearCode, received: BitVector) -> np.ndarray:
    """s(r) in the layout of ``code.syndrome_table()``: a scalar word or a row of words"""
    words = syndrome(code, received).words
    return words[0] if code.syndrome_words == 1 else words


def pattern_syndromes(code: LinearCode, key: Hashable, patterns: np.ndarray) -> np.ndarray:
    """
    XOR of the column syndromes of every pattern, cached per code

    Args:
        code: The code whose column syndromes are combined
        key: Identifies ``patterns`` among the tables of this code
        patterns: (lanes, weight) array of 1-based positions

    Returns:
        (lanes,) uint64 for single-word syndromes, else (lanes, words)
    """
    cache_key = (id(code), key)
    with _lock:
        entry = _tables.get(cache_key)
    if entry is not None and entry[0] is code:
        return entry[1]

    table = code.syndrome_table()
    if patterns.shape[1] == 0:
        values = np.zeros((len(patterns),) + table.shape[1:], dtype=np.uint64)
    else:
        values = np.bitwise_xor.reduce(table[patterns - 1], axis=1)
    values.flags.writeable = False

    with _lock:
        _tables[cache_key] = (code, values)
    logger.debug(f"Built {len(values)}-lane syndrome table {key} for {code!r}")
    return values


def first_match(values: np.ndarray, base: np.ndarray) -> Optional[int]:
    """Index of the first lane whose syndrome equals ``base``, or None"""
    hits = values == base
    if hits.ndim > 1:
        hits = hits.all(axis=1)
    if not hits.any():
        return None
    return int(np.argmax(hits))
