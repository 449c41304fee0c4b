# Bit-packed arithmetic over GF(2): vectors, matrices, products and elimination
import logging
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from grandab.utils.errors import CodeConstructionError, DimensionError

logger = logging.getLogger(__name__)

WORD_BITS = 64
WORD_DTYPE = np.uint64


def word_count(nbits: int) -> int:
    """Number of 64-bit words needed to hold ``nbits`` bits"""
    return -(-nbits // WORD_BITS)


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """
    Pack 0/1 values along the last axis into little-endian uint64 words

    Args:
        bits: Array of shape (..., nbits) holding 0/1 values

    Returns:
        Array of shape (..., word_count(nbits)); input bit j lands in bit j % 64 of word j // 64
    """
    bits = np.asarray(bits)
    nbits = bits.shape[-1]
    padded = np.zeros(bits.shape[:-1] + (word_count(nbits) * WORD_BITS,), dtype=np.uint8)
    padded[..., :nbits] = bits != 0
    packed = np.packbits(padded, axis=-1, bitorder="little")
    return packed.view("<u8").astype(WORD_DTYPE)


def unpack_bits(words: np.ndarray, nbits: int) -> np.ndarray:
    """Inverse of :func:`pack_bits`; returns a uint8 array of shape (..., nbits)"""
    as_bytes = np.ascontiguousarray(words, dtype="<u8").view(np.uint8)
    return np.unpackbits(as_bytes, axis=-1, count=nbits, bitorder="little")


def pack_word(bits: np.ndarray) -> int:
    """Single-word fast path: pack at most 64 bits into one integer"""
    bits = np.asarray(bits, dtype=WORD_DTYPE)
    if bits.size > WORD_BITS:
        raise DimensionError(f"pack_word takes at most {WORD_BITS} bits, got {bits.size}")
    shifted = bits << np.arange(bits.size, dtype=WORD_DTYPE)
    return int(np.bitwise_or.reduce(shifted)) if bits.size else 0


def _tail_mask(nbits: int) -> Optional[np.uint64]:
    tail = nbits % WORD_BITS
    return WORD_DTYPE((1 << tail) - 1) if tail else None


class BitVector:
    """
    Immutable packed vector over GF(2)

    Public positions are 1-based: position 1 is stored at bit 0 of word 0.
    Bits beyond ``len`` are always zero in storage.
    """

    __slots__ = ("_words", "_len")

    def __init__(self, words: np.ndarray, length: int):
        if length < 0:
            raise DimensionError(f"vector length must be non-negative, got {length}")
        words = np.array(words, dtype=WORD_DTYPE, copy=True).reshape(word_count(length))
        mask = _tail_mask(length)
        if mask is not None:
            words[-1] &= mask
        words.flags.writeable = False
        self._words = words
        self._len = length

    # Constructors

    @classmethod
    def zeros(cls, length: int) -> "BitVector":
        return cls(np.zeros(word_count(length), dtype=WORD_DTYPE), length)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitVector":
        """Build from a sequence of 0/1 values (first value is position 1)"""
        array = np.asarray(bits if isinstance(bits, np.ndarray) else list(bits), dtype=np.uint8)
        if array.ndim != 1:
            raise DimensionError(f"expected a 1-D bit sequence, got shape {array.shape}")
        return cls(pack_bits(array), array.size)

    @classmethod
    def from_positions(cls, length: int, positions: Iterable[int]) -> "BitVector":
        """Vector with ones at the given 1-based positions"""
        bits = np.zeros(length, dtype=np.uint8)
        for position in positions:
            if not 1 <= position <= length:
                raise DimensionError(f"position {position} outside [1..{length}]")
            bits[position - 1] ^= 1
        return cls(pack_bits(bits), length)

    @classmethod
    def from_int(cls, value: int, length: int) -> "BitVector":
        """Position i holds bit i-1 of ``value``"""
        if value < 0 or value >> length:
            raise DimensionError(f"value {value:#x} does not fit in {length} bits")
        mask = (1 << WORD_BITS) - 1
        words = [(value >> (WORD_BITS * w)) & mask for w in range(word_count(length))]
        return cls(np.array(words, dtype=WORD_DTYPE), length)

    @classmethod
    def from_hex(cls, text: str, length: int) -> "BitVector":
        """
        Parse a hex word, most-significant nibble first

        Position 1 is the most significant bit of the ``length``-bit value, so the string reads
        left to right like a row of 0/1 characters.
        """
        cleaned = text.strip().lower()
        if cleaned.startswith("0x"):
            cleaned = cleaned[2:]
        try:
            value = int(cleaned, 16)
        except ValueError as e:
            raise DimensionError(f"invalid hex word '{text}': {e}") from e
        if value >> length:
            raise DimensionError(f"hex word '{text}' does not fit in {length} bits")
        bits = np.array([(value >> (length - j)) & 1 for j in range(1, length + 1)], dtype=np.uint8)
        return cls(pack_bits(bits), length)

    # Accessors

    @property
    def words(self) -> np.ndarray:
        return self._words

    def __len__(self) -> int:
        return self._len

    def bit(self, position: int) -> int:
        """Value at a 1-based position"""
        if not 1 <= position <= self._len:
            raise DimensionError(f"position {position} outside [1..{self._len}]")
        index = position - 1
        return int(self._words[index // WORD_BITS] >> WORD_DTYPE(index % WORD_BITS)) & 1

    def to_bits(self) -> np.ndarray:
        return unpack_bits(self._words, self._len)

    def to_int(self) -> int:
        return sum(int(word) << (WORD_BITS * i) for i, word in enumerate(self._words))

    def to_hex(self) -> str:
        value = 0
        for bit in self.to_bits():
            value = (value << 1) | int(bit)
        return f"{value:0{max(1, -(-self._len // 4))}x}"

    def weight(self) -> int:
        return int(np.bitwise_count(self._words).sum())

    def is_zero(self) -> bool:
        return not self._words.any()

    def support(self) -> Tuple[int, ...]:
        """Sorted 1-based positions of the ones"""
        return tuple(int(i) + 1 for i in np.flatnonzero(self.to_bits()))

    def flip(self, positions: Iterable[int]) -> "BitVector":
        """Return a copy with the given 1-based positions inverted"""
        return self ^ BitVector.from_positions(self._len, positions)

    def slice(self, start: int, stop: int) -> "BitVector":
        """Positions start..stop inclusive (1-based) as a new vector"""
        return BitVector.from_bits(self.to_bits()[start - 1 : stop])

    # Arithmetic

    def _check_same_length(self, other: "BitVector") -> None:
        if self._len != other._len:
            raise DimensionError(f"length mismatch: {self._len} vs {other._len}")

    def __xor__(self, other: "BitVector") -> "BitVector":
        self._check_same_length(other)
        return BitVector(self._words ^ other._words, self._len)

    def __and__(self, other: "BitVector") -> "BitVector":
        self._check_same_length(other)
        return BitVector(self._words & other._words, self._len)

    def dot(self, other: "BitVector") -> int:
        """Inner product over GF(2)"""
        self._check_same_length(other)
        return int(np.bitwise_count(self._words & other._words).sum()) & 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self._len == other._len and np.array_equal(self._words, other._words)

    def __hash__(self) -> int:
        return hash((self._len, self._words.tobytes()))

    def __repr__(self) -> str:
        if self._len <= 64:
            return f"BitVector('{''.join(str(b) for b in self.to_bits())}')"
        return f"BitVector(len={self._len}, hex={self.to_hex()})"


class BitMatrix:
    """Immutable row-major packed matrix over GF(2); rows and columns are 1-based publicly"""

    __slots__ = ("_words", "_rows", "_cols")

    def __init__(self, words: np.ndarray, rows: int, cols: int):
        words = np.array(words, dtype=WORD_DTYPE, copy=True).reshape(rows, word_count(cols))
        mask = _tail_mask(cols)
        if mask is not None and rows:
            words[:, -1] &= mask
        words.flags.writeable = False
        self._words = words
        self._rows = rows
        self._cols = cols

    @classmethod
    def from_bits(cls, bits: Union[np.ndarray, Sequence[Sequence[int]]]) -> "BitMatrix":
        array = np.asarray(bits, dtype=np.uint8)
        if array.ndim != 2:
            raise DimensionError(f"expected a 2-D bit array, got shape {array.shape}")
        rows, cols = array.shape
        return cls(pack_bits(array), rows, cols)

    @classmethod
    def from_rows(cls, rows: Sequence[BitVector], cols: Optional[int] = None) -> "BitMatrix":
        if not rows:
            if cols is None:
                raise DimensionError("cannot infer column count of an empty row list")
            return cls.zeros(0, cols)
        width = len(rows[0]) if cols is None else cols
        for i, row in enumerate(rows, start=1):
            if len(row) != width:
                raise DimensionError(f"row {i} has {len(row)} columns, expected {width}")
        return cls(np.stack([row.words for row in rows]), len(rows), width)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(np.zeros((rows, word_count(cols)), dtype=WORD_DTYPE), rows, cols)

    @classmethod
    def identity(cls, size: int) -> "BitMatrix":
        return cls.from_bits(np.eye(size, dtype=np.uint8))

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    @property
    def shape(self) -> Tuple[int, int]:
        return self._rows, self._cols

    @property
    def words(self) -> np.ndarray:
        return self._words

    def row(self, index: int) -> BitVector:
        if not 1 <= index <= self._rows:
            raise DimensionError(f"row {index} outside [1..{self._rows}]")
        return BitVector(self._words[index - 1], self._cols)

    def column(self, index: int) -> BitVector:
        if not 1 <= index <= self._cols:
            raise DimensionError(f"column {index} outside [1..{self._cols}]")
        return BitVector.from_bits(self.to_bits()[:, index - 1])

    def to_bits(self) -> np.ndarray:
        return unpack_bits(self._words, self._cols)

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_bits(self.to_bits().T)

    @property
    def T(self) -> "BitMatrix":
        return self.transpose()

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        if self._rows != other._rows:
            raise DimensionError(f"row count mismatch: {self._rows} vs {other._rows}")
        return BitMatrix.from_bits(np.hstack([self.to_bits(), other.to_bits()]))

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if self._cols != other._cols:
            raise DimensionError(f"column count mismatch: {self._cols} vs {other._cols}")
        stacked = np.vstack([self._words, other._words])
        return BitMatrix(stacked, self._rows + other._rows, self._cols)

    def __matmul__(self, other):
        if isinstance(other, BitVector):
            return mat_vec_mul(self, other)
        if isinstance(other, BitMatrix):
            return mat_mul(self, other)
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self._words, other._words)

    def __hash__(self) -> int:
        return hash((self._rows, self._cols, self._words.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self._rows}x{self._cols})"


def mat_vec_mul(matrix: BitMatrix, vector: BitVector) -> BitVector:
    """
    Compute M·vᵀ: bit j of the result is the parity of row j AND v

    Raises:
        DimensionError: If M.cols != len(v)
    """
    if matrix.cols != len(vector):
        raise DimensionError(
            f"cannot multiply {matrix.rows}x{matrix.cols} matrix by length-{len(vector)} vector"
        )
    parities = np.bitwise_count(matrix.words & vector.words).sum(axis=1) & 1
    if matrix.rows <= WORD_BITS:
        return BitVector.from_int(pack_word(parities), matrix.rows)
    return BitVector(pack_bits(parities), matrix.rows)


def vec_mat_mul(vector: BitVector, matrix: BitMatrix) -> BitVector:
    """Compute u·M as the XOR of the rows of M selected by u"""
    if len(vector) != matrix.rows:
        raise DimensionError(
            f"cannot multiply length-{len(vector)} vector by {matrix.rows}x{matrix.cols} matrix"
        )
    selected = matrix.words[vector.to_bits().astype(bool)]
    if not len(selected):
        return BitVector.zeros(matrix.cols)
    return BitVector(np.bitwise_xor.reduce(selected, axis=0), matrix.cols)


def mat_mul(left: BitMatrix, right: BitMatrix) -> BitMatrix:
    if left.cols != right.rows:
        raise DimensionError(
            f"cannot multiply {left.rows}x{left.cols} by {right.rows}x{right.cols}"
        )
    product = left.to_bits().astype(np.int64) @ right.to_bits().astype(np.int64)
    return BitMatrix.from_bits(product & 1)


def _row_reduce(
    bits: np.ndarray, track: bool = False
) -> Tuple[np.ndarray, List[int], Optional[np.ndarray]]:
    """
    Gauss-Jordan elimination on a copy of ``bits``

    Returns:
        (rref, 0-based pivot columns, row-operation matrix E with E·bits = rref)
    """
    work = np.array(bits, dtype=np.uint8, copy=True) & 1
    rows, cols = work.shape
    transform = np.eye(rows, dtype=np.uint8) if track else None
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        candidates = np.flatnonzero(work[r:, c])
        if candidates.size == 0:
            continue
        p = r + int(candidates[0])
        if p != r:
            work[[r, p]] = work[[p, r]]
            if transform is not None:
                transform[[r, p]] = transform[[p, r]]
        eliminate = work[:, c].astype(bool)
        eliminate[r] = False
        work[eliminate] ^= work[r]
        if transform is not None:
            transform[eliminate] ^= transform[r]
        pivots.append(c)
        r += 1
    return work, pivots, transform


def gf2_rank(matrix: BitMatrix) -> int:
    """Rank over GF(2); the input is not modified"""
    if matrix.rows == 0 or matrix.cols == 0:
        return 0
    _, pivots, _ = _row_reduce(matrix.to_bits())
    return len(pivots)


def right_inverse(generator: BitMatrix) -> BitMatrix:
    """
    n×k matrix R with G·R = I_k for a full-row-rank k×n generator

    Raises:
        DimensionError: If k > n
        CodeConstructionError: If G is rank deficient
    """
    k, n = generator.shape
    if k > n:
        raise DimensionError(f"generator has more rows than columns ({k}x{n})")
    _, pivots, transform = _row_reduce(generator.to_bits(), track=True)
    if len(pivots) < k:
        raise CodeConstructionError(
            f"generator matrix is rank deficient: rank {len(pivots)} < k={k}"
        )

    inverse = np.zeros((n, k), dtype=np.uint8)
    for i, column in enumerate(pivots):
        inverse[column, :] = transform[i, :]
    result = BitMatrix.from_bits(inverse)

    if mat_mul(generator, result) != BitMatrix.identity(k):
        raise CodeConstructionError("right inverse verification failed: G·R != I")
    return result


def nullspace_basis(matrix: BitMatrix) -> BitMatrix:
    """
    Basis of {x : M·xᵀ = 0}, one row per free column in ascending column order

    The basis is read off the reduced row echelon form, so it is identical across runs.
    """
    rref, pivots, _ = _row_reduce(matrix.to_bits())
    n = matrix.cols
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    for b, f in enumerate(free):
        basis[b, f] = 1
        for i, p in enumerate(pivots):
            basis[b, p] = rref[i, f]
    return BitMatrix.from_bits(basis) if free else BitMatrix.zeros(0, n)
