# In-process LRU cache of constructed codes, keyed by CRC parameters or parity-check matrix
import hashlib
import logging
from threading import Lock

from cachetools import LRUCache

from grandab.config.settings import settings
from grandab.models.simulation import CodeSource
from grandab.services.codes import (
    LinearCode,
    crc_code,
    format_parity_check,
    from_parity_check,
    load_parity_check,
)

logger = logging.getLogger(__name__)


def deterministic_hash(value: str) -> str:
    """Create a deterministic short hash for use in cache keys."""
    return hashlib.md5(value.encode()).hexdigest()[:12]


class CodeCache:
    """
    LRU cache of LinearCode objects

    Code construction runs rank checks and an elimination per code, so sweeps and worker
    processes look codes up here instead of rebuilding them per block.
    """

    def __init__(self, maxsize: int):
        self._cache: LRUCache = LRUCache(maxsize=maxsize)
        self._lock = Lock()

    def get_or_build(self, source: CodeSource) -> LinearCode:
        """
        Return the cached code for ``source``, building it on a miss

        Args:
            source: CRC spec or parity-check file

        Returns:
            The constructed code

        Raises:
            CodeConstructionError: If the code cannot be built
        """
        if source.crc is not None:
            key = f"crc:{source.crc.n}:{source.crc.k}:{source.crc.poly:#x}"
            H = None
        else:
            H = load_parity_check(source.hfile)
            key = f"hfile:{deterministic_hash(format_parity_check(H, fmt='hex'))}"

        with self._lock:
            cached = self._cache.get(key)
        if cached is not None:
            logger.debug(f"Code cache hit: {key}")
            return cached

        if source.crc is not None:
            code = crc_code(source.crc)
        else:
            code = from_parity_check(H, name=source.hfile.name)
            logger.info(f"Built code {code!r} from {source.hfile}")

        with self._lock:
            self._cache[key] = code
        logger.debug(f"Cached code under {key}")
        return code

    def invalidate(self) -> None:
        """Drop every cached code"""
        with self._lock:
            self._cache.clear()
        logger.debug("Code cache cleared")

    def __len__(self) -> int:
        return len(self._cache)


# Global code cache instance
code_cache = CodeCache(maxsize=settings.CODE_CACHE_SIZE)


def load_code(source: CodeSource) -> LinearCode:
    """Build (or fetch) the code described by ``source``"""
    return code_cache.get_or_build(source)
