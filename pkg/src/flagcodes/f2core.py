"""Bit-packed vectors and matrices over F2.

Bits are packed into Python integers: element ``i`` of a vector is bit ``i``
of its integer.  For a column of a matrix, the top row is bit 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgument

WORD = 64
_WORD_MASK = (1 << WORD) - 1


def popcount(x: int) -> int:
    return x.bit_count() if hasattr(x, "bit_count") else bin(x).count("1")


@dataclass(frozen=True)
class BitVector:
    length: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.length < 0:
            raise InvalidArgument("length must be non-negative")
        if self.bits < 0 or self.bits >> self.length:
            raise InvalidArgument(f"bits set beyond length {self.length}")

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(length, 0)

    @classmethod
    def unit(cls, length: int, index: int) -> BitVector:
        if not 0 <= index < length:
            raise InvalidArgument(f"index {index} out of range for length {length}")
        return cls(length, 1 << index)

    @classmethod
    def from_iterable(cls, values: Iterable[int]) -> BitVector:
        bits = 0
        n = 0
        for i, v in enumerate(values):
            if v not in (0, 1, True, False):
                raise InvalidArgument(f"non-binary entry {v!r}")
            if v:
                bits |= 1 << i
            n = i + 1
        return cls(n, bits)

    @classmethod
    def from_string(cls, text: str) -> BitVector:
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise InvalidArgument(f"not a bit string: {text!r}")
        return cls.from_iterable(int(ch) for ch in text)

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> BitVector:
        bits = 0
        for i in support:
            if not 0 <= i < length:
                raise InvalidArgument(f"index {i} out of range for length {length}")
            bits ^= 1 << i
        return cls(length, bits)

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self.length
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __len__(self) -> int:
        return self.length

    def __iter__(self):
        return (int((self.bits >> i) & 1) for i in range(self.length))

    def __xor__(self, other: BitVector) -> BitVector:
        return xor(self, other)

    @property
    def weight(self) -> int:
        return popcount(self.bits)

    def is_zero(self) -> bool:
        return self.bits == 0

    def support(self) -> list[int]:
        return [i for i in range(self.length) if (self.bits >> i) & 1]

    def to_list(self) -> list[int]:
        return list(self)

    def __str__(self) -> str:
        return "".join(str(b) for b in self)


def xor(a: BitVector, b: BitVector) -> BitVector:
    if a.length != b.length:
        raise InvalidArgument(f"length mismatch: {a.length} != {b.length}")
    return BitVector(a.length, a.bits ^ b.bits)


def weight(v: BitVector) -> int:
    return v.weight


def suffix_xor(row: BitVector) -> BitVector:
    """Element ``j`` of the result is the XOR of ``row[j:]``."""
    out = 0
    acc = 0
    for j in range(row.length - 1, -1, -1):
        acc ^= (row.bits >> j) & 1
        out |= acc << j
    return BitVector(row.length, out)


@dataclass(frozen=True)
class BitMatrix:
    """Dense binary matrix stored as a tuple of packed rows."""

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise InvalidArgument("matrix dimensions must be non-negative")
        if len(self.data) != self.rows:
            raise InvalidArgument(f"expected {self.rows} rows, got {len(self.data)}")
        for r in self.data:
            if r < 0 or r >> self.cols:
                raise InvalidArgument("row has bits beyond the column count")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int] | BitVector]) -> BitMatrix:
        vecs = [r if isinstance(r, BitVector) else BitVector.from_iterable(r) for r in rows]
        if not vecs:
            return cls(0, 0, ())
        cols = vecs[0].length
        if any(v.length != cols for v in vecs):
            raise InvalidArgument("ragged rows")
        return cls(len(vecs), cols, tuple(v.bits for v in vecs))

    @classmethod
    def from_columns(cls, columns: Sequence[int | BitVector], rows: int | None = None) -> BitMatrix:
        """Build from column bitsets (top row = bit 0)."""
        ints = [c.bits if isinstance(c, BitVector) else int(c) for c in columns]
        if rows is None:
            lengths = [c.length for c in columns if isinstance(c, BitVector)]
            rows = lengths[0] if lengths else max((c.bit_length() for c in ints), default=0)
        data = [0] * rows
        for j, c in enumerate(ints):
            if c >> rows:
                raise InvalidArgument("column taller than the matrix")
            for i in range(rows):
                if (c >> i) & 1:
                    data[i] |= 1 << j
        return cls(rows, len(ints), tuple(data))

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.data[i])

    def column(self, j: int) -> BitVector:
        return BitVector(self.rows, self.column_int(j))

    def column_int(self, j: int) -> int:
        if not 0 <= j < self.cols:
            raise IndexError(j)
        c = 0
        for i, r in enumerate(self.data):
            c |= ((r >> j) & 1) << i
        return c

    def column_ints(self) -> list[int]:
        cols = [0] * self.cols
        for i, r in enumerate(self.data):
            j = 0
            while r:
                if r & 1:
                    cols[j] |= 1 << i
                r >>= 1
                j += 1
        return cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.data[i] >> j) & 1

    def __xor__(self, other: BitMatrix) -> BitMatrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InvalidArgument("shape mismatch")
        return BitMatrix(self.rows, self.cols, tuple(a ^ b for a, b in zip(self.data, other.data)))

    def vstack(self, other: BitMatrix) -> BitMatrix:
        if self.cols != other.cols:
            raise InvalidArgument("column count mismatch")
        return BitMatrix(self.rows + other.rows, self.cols, self.data + other.data)

    def select_columns(self, order: Sequence[int]) -> BitMatrix:
        cols = self.column_ints()
        return BitMatrix.from_columns([cols[j] for j in order], self.rows)

    def mul_vec(self, v: BitVector) -> BitVector:
        if v.length != self.cols:
            raise InvalidArgument("vector length does not match column count")
        out = 0
        for i, r in enumerate(self.data):
            out |= (popcount(r & v.bits) & 1) << i
        return BitVector(self.rows, out)

    def to_numpy(self) -> np.ndarray:
        a = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for i, r in enumerate(self.data):
            for j in range(self.cols):
                a[i, j] = (r >> j) & 1
        return a

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        for r in self.data:
            lines.append(" ".join(str((r >> j) & 1) for j in range(self.cols)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> BitMatrix:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        return parse_matrix_lines(lines)[0]

    def __str__(self) -> str:
        return "\n".join("".join(str((r >> j) & 1) for j in range(self.cols)) for r in self.data)


def parse_matrix_lines(lines: Sequence[str]) -> tuple[BitMatrix, int]:
    """Parse one matrix from ``lines``; return it with the number of lines consumed."""
    if not lines:
        raise InvalidArgument("missing matrix header")
    try:
        rows, cols = (int(x) for x in lines[0].split())
    except ValueError as exc:
        raise InvalidArgument(f"bad matrix header {lines[0]!r}") from exc
    if len(lines) < rows + 1:
        raise InvalidArgument(f"matrix truncated: expected {rows} rows")
    data = []
    for ln in lines[1 : rows + 1]:
        toks = ln.split()
        if len(toks) != cols or any(t not in ("0", "1") for t in toks):
            raise InvalidArgument(f"bad matrix row {ln!r}")
        data.append(sum(1 << j for j, t in enumerate(toks) if t == "1"))
    return BitMatrix(rows, cols, tuple(data)), rows + 1


def column_weight_profile(m: BitMatrix) -> list[int]:
    return [popcount(c) for c in m.column_ints()]


def int_to_words(x: int, nwords: int) -> np.ndarray:
    out = np.zeros(nwords, dtype=np.uint64)
    for k in range(nwords):
        out[k] = (x >> (WORD * k)) & _WORD_MASK
    return out


def words_to_int(words: np.ndarray) -> int:
    x = 0
    for k in range(len(words) - 1, -1, -1):
        x = (x << WORD) | int(words[k])
    return x


def nwords(nbits: int) -> int:
    return max(1, -(-nbits // WORD))
