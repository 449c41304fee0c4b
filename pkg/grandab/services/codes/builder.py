# Construction and validation of binary linear block codes
import logging
from dataclasses import dataclass, field
from typing import Iterable, Tuple

import numpy as np

from grandab.models.simulation import CrcSpec
from grandab.services.gf2 import (
    BitMatrix,
    BitVector,
    gf2_rank,
    mat_mul,
    mat_vec_mul,
    nullspace_basis,
    right_inverse,
    vec_mat_mul,
)
from grandab.utils.errors import CodeConstructionError, DimensionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LinearCode:
    """
    (n, k) binary linear code with generator G, parity-check H and right inverse Ginv

    ``col_syndromes`` holds the n single-flip syndromes s_i = H·1_iᵀ (the columns of H) as packed
    words, one row per position: row i-1 is s_i. Immutable after construction.
    """

    n: int
    k: int
    G: BitMatrix
    H: BitMatrix
    Ginv: BitMatrix
    col_syndromes: np.ndarray
    systematic: bool
    name: str = ""
    syndrome_ints: Tuple[int, ...] = field(default=(), repr=False)

    @property
    def redundancy(self) -> int:
        return self.n - self.k

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def syndrome_words(self) -> int:
        return self.col_syndromes.shape[1]

    def column_syndrome(self, position: int) -> BitVector:
        """s_i for a 1-based position i"""
        if not 1 <= position <= self.n:
            raise DimensionError(f"position {position} outside [1..{self.n}]")
        return BitVector(self.col_syndromes[position - 1], self.redundancy)

    def syndrome_table(self) -> np.ndarray:
        """
        Column syndromes in the layout the decoders XOR against

        Single-word syndromes (n-k <= 64) come back as a flat uint64 array of length n so a
        membership check is one XOR and one compare per lane; wider ones keep shape (n, words).
        """
        if self.syndrome_words == 1:
            return self.col_syndromes[:, 0]
        return self.col_syndromes

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"LinearCode({self.n},{self.k}){label}"


def _assemble(G: BitMatrix, H: BitMatrix, systematic: bool, name: str) -> LinearCode:
    """Derive Ginv and the column syndromes, then check every code invariant"""
    k, n = G.shape
    if H.cols != n:
        raise CodeConstructionError(f"G has {n} columns but H has {H.cols}")
    if k < 1:
        raise CodeConstructionError("k must be >= 1")
    if n - k < 1:
        raise CodeConstructionError("at least one parity constraint (n-k >= 1) is required")

    rank_g = gf2_rank(G)
    if rank_g != k:
        raise CodeConstructionError(f"generator matrix is rank deficient: rank {rank_g} < k={k}")
    rank_h = gf2_rank(H)
    if H.rows != n - k or rank_h != n - k:
        raise CodeConstructionError(
            f"parity-check matrix must have full rank n-k={n - k} (rows {H.rows}, rank {rank_h})"
        )
    if mat_mul(H, G.transpose()).to_bits().any():
        raise CodeConstructionError("H·Gᵀ != 0: generator rows are not codewords")

    Ginv = right_inverse(G)
    col_syndromes = H.transpose().words.copy()
    col_syndromes.flags.writeable = False
    syndrome_ints = tuple(BitVector(row, n - k).to_int() for row in col_syndromes)

    code = LinearCode(
        n=n,
        k=k,
        G=G,
        H=H,
        Ginv=Ginv,
        col_syndromes=col_syndromes,
        systematic=systematic,
        name=name,
        syndrome_ints=syndrome_ints,
    )
    logger.debug(f"Assembled {code!r} (systematic={systematic})")
    return code


def _normalize_poly(spec: CrcSpec) -> int:
    """Strip an explicit leading term and check the degree against n-k"""
    degree = spec.n - spec.k
    poly = spec.poly
    if poly >> degree == 1:
        poly ^= 1 << degree
    if poly >> degree:
        raise CodeConstructionError(
            f"generator polynomial {spec.poly:#x} has degree {spec.poly.bit_length() - 1}, "
            f"expected n-k={degree}"
        )
    if not poly & 1:
        raise CodeConstructionError(f"generator polynomial {spec.poly:#x} needs a constant term")
    return poly


def crc_code(spec: CrcSpec) -> LinearCode:
    """
    Build the systematic CRC code for a generator polynomial

    Codewords are the k message bits followed by the n-k remainder bits of x^(n-k)·m(x) mod g(x),
    MSB first, with a zero initial register, no reflection and no final XOR.

    Args:
        spec: Code length, message length and polynomial (leading x^(n-k) implicit)

    Returns:
        LinearCode with G = [I_k | P] and H = [Pᵀ | I_(n-k)]

    Raises:
        CodeConstructionError: If deg(poly) != n-k or the polynomial has no constant term
    """
    n, k = spec.n, spec.k
    degree = n - k
    poly = _normalize_poly(spec)
    full = (1 << degree) | poly

    # remainders[j] = x^(n-k+j) mod g(x)
    remainders = []
    remainder = poly
    for _ in range(k):
        remainders.append(remainder)
        remainder <<= 1
        if remainder >> degree:
            remainder ^= full

    # message bit i is the coefficient of x^(k-i), so row i of P is x^(n-i) mod g
    parity = np.zeros((k, degree), dtype=np.uint8)
    for i in range(1, k + 1):
        value = remainders[n - i - degree]
        for c in range(1, degree + 1):
            parity[i - 1, c - 1] = (value >> (degree - c)) & 1

    G = BitMatrix.from_bits(np.hstack([np.eye(k, dtype=np.uint8), parity]))
    H = BitMatrix.from_bits(np.hstack([parity.T, np.eye(degree, dtype=np.uint8)]))
    code = _assemble(G, H, systematic=True, name=spec.label)
    logger.info(f"Built CRC code {spec.label} with g(x) = {full:#x}")
    return code


def from_parity_check(H: BitMatrix, name: str = "") -> LinearCode:
    """
    Build a code from its parity-check matrix

    G is the nullspace basis read off the reduced row echelon form of H (free columns in
    ascending order), so the same H always yields the same G.

    Raises:
        CodeConstructionError: If H is rank deficient or leaves no message bits
    """
    rows, n = H.shape
    rank = gf2_rank(H)
    if rank != rows:
        raise CodeConstructionError(
            f"parity-check matrix is rank deficient: rank {rank} < {rows} rows"
        )
    if n - rows < 1:
        raise CodeConstructionError(f"H of shape {rows}x{n} leaves k={n - rows}; k must be >= 1")

    G = nullspace_basis(H)
    k = G.rows
    systematic = bool(np.array_equal(G.to_bits()[:, :k], np.eye(k, dtype=np.uint8)))
    return _assemble(G, H, systematic=systematic, name=name)


def encode(code: LinearCode, message: BitVector) -> BitVector:
    """c = u·G"""
    if len(message) != code.k:
        raise DimensionError(f"message has {len(message)} bits, code expects k={code.k}")
    return vec_mat_mul(message, code.G)


def syndrome(code: LinearCode, received: BitVector) -> BitVector:
    """s = H·rᵀ"""
    if len(received) != code.n:
        raise DimensionError(f"received word has {len(received)} bits, code expects n={code.n}")
    return mat_vec_mul(code.H, received)


def extract_message(code: LinearCode, codeword: BitVector) -> BitVector:
    """û = ĉ·Ginv, or the first k bits for systematic codes"""
    if code.systematic:
        return codeword.slice(1, code.k)
    return vec_mat_mul(codeword, code.Ginv)


def correct_word(
    code: LinearCode, received: BitVector, flipped: Iterable[int]
) -> Tuple[BitVector, BitVector]:
    """
    Word generator: apply the error pattern and recover the message

    Args:
        code: The code being decoded
        received: Hard-decision vector r
        flipped: 1-based flip positions of the winning pattern

    Returns:
        (estimated codeword r ⊕ e, estimated message)
    """
    codeword = received.flip(flipped)
    return codeword, extract_message(code, codeword)


def is_codeword(code: LinearCode, word: BitVector) -> bool:
    return syndrome(code, word).is_zero()


def hamming_parity_check(r: int = 3) -> BitMatrix:
    """Parity-check matrix of the (2^r - 1, 2^r - 1 - r) Hamming code; column i is i in binary"""
    n = (1 << r) - 1
    bits = np.array([[(col >> (r - 1 - row)) & 1 for col in range(1, n + 1)] for row in range(r)])
    return BitMatrix.from_bits(bits)

