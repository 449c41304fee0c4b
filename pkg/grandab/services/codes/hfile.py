# Parity-check matrix files
#
# Plain text. The first line is "n-k n"; then one line per row of H, either n characters in {0,1}
# or a hex word of ceil(n/4) digits, most-significant nibble first (column 1 is the top bit).
# Blank lines and anything after '#' are ignored.

import logging
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np

from grandab.services.gf2 import BitMatrix, BitVector
from grandab.utils.errors import ConfigurationError, DimensionError, ParityCheckFileError

logger = logging.getLogger(__name__)

BINARY_DIGITS = frozenset("01")


def _content_lines(text: str) -> List[Tuple[int, str]]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            lines.append((number, content))
    return lines


def _parse_header(number: int, line: str, source: str) -> Tuple[int, int]:
    parts = line.split()
    if len(parts) != 2 or not all(part.isdigit() for part in parts):
        raise ParityCheckFileError(f"{source}:{number}: header must be 'n-k n', got '{line}'")
    rows, n = int(parts[0]), int(parts[1])
    if not 1 <= rows < n:
        raise ParityCheckFileError(f"{source}:{number}: header needs 1 <= n-k < n, got {rows} {n}")
    return rows, n


def _parse_row(number: int, line: str, n: int, source: str) -> np.ndarray:
    line = "".join(line.split())
    if len(line) == n and set(line) <= BINARY_DIGITS:
        return np.fromiter((int(ch) for ch in line), dtype=np.uint8, count=n)

    digits = line[2:] if line.lower().startswith("0x") else line
    if len(digits) == -(-n // 4):
        try:
            return BitVector.from_hex(digits, n).to_bits()
        except DimensionError as e:
            raise ParityCheckFileError(f"{source}:{number}: {e}") from e

    raise ParityCheckFileError(
        f"{source}:{number}: expected {n} binary digits or {-(-n // 4)} hex digits, "
        f"got {len(line)} characters"
    )


def parse_parity_check(text: str, source: str = "<string>") -> BitMatrix:
    """
    Parse the text of a parity-check matrix file

    Args:
        text: File contents
        source: Name used in error messages

    Returns:
        H as an (n-k)×n BitMatrix

    Raises:
        ParityCheckFileError: On any malformed line, with its line number
    """
    lines = _content_lines(text)
    if not lines:
        raise ParityCheckFileError(f"{source}: empty parity-check file")

    header_number, header = lines[0]
    rows, n = _parse_header(header_number, header, source)

    body = lines[1:]
    if len(body) != rows:
        raise ParityCheckFileError(f"{source}: header announces {rows} rows, found {len(body)}")

    bits = np.stack([_parse_row(number, line, n, source) for number, line in body])
    return BitMatrix.from_bits(bits)


def load_parity_check(path: Union[str, Path]) -> BitMatrix:
    """Read a parity-check matrix file from disk"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParityCheckFileError(f"cannot read parity-check file {path}: {e}") from e
    matrix = parse_parity_check(text, source=str(path))
    logger.debug(f"Loaded {matrix.rows}x{matrix.cols} parity-check matrix from {path}")
    return matrix


def format_parity_check(H: BitMatrix, fmt: str = "bin") -> str:
    """Render H in the file format ("bin" rows of 0/1 or "hex" rows)"""
    if fmt not in ("bin", "hex"):
        raise ConfigurationError(f"unknown parity-check format '{fmt}'")
    lines = [f"{H.rows} {H.cols}"]
    for i in range(1, H.rows + 1):
        row = H.row(i)
        lines.append(row.to_hex() if fmt == "hex" else "".join(str(b) for b in row.to_bits()))
    return "\n".join(lines) + "\n"


def dump_parity_check(H: BitMatrix, path: Union[str, Path], fmt: str = "bin") -> Path:
    """Write H to ``path`` so it can be reloaded with :func:`load_parity_check`"""
    path = Path(path)
    path.write_text(format_parity_check(H, fmt), encoding="utf-8")
    logger.info(f"Wrote {H.rows}x{H.cols} parity-check matrix to {path}")
    return path
