"""Classical parity-check matrices: Hamming and BCH construction, distance
verification, column ordering and lookup-table syndrome decoding."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np

from . import _kernels
from .errors import InvalidArgument, ResourceLimit
from .f2core import BitMatrix, BitVector
from .galois import FieldParams, alpha_power, make_field

DEFAULT_DISTANCE_BUDGET = 10**8


@dataclass(frozen=True)
class ParityCheck:
    H: BitMatrix
    d: int
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.d < 1:
            raise InvalidArgument("distance must be >= 1")
        if any(c == 0 for c in self.H.column_ints()):
            raise InvalidArgument("parity-check matrix has a zero column")

    @property
    def w(self) -> int:
        return self.H.cols

    @property
    def rows(self) -> int:
        return self.H.rows

    @property
    def t(self) -> int:
        return (self.d - 1) // 2

    @cached_property
    def columns(self) -> tuple[int, ...]:
        return tuple(self.H.column_ints())

    def syndrome(self, e: BitVector) -> BitVector:
        return self.H.mul_vec(e)

    @cached_property
    def _lookup(self) -> dict[int, int]:
        # weight-ascending, lexicographic: first hit is the minimal-weight error
        cols = self.columns
        table: dict[int, int] = {}
        for k in range(self.t + 1):
            for subset in combinations(range(self.w), k):
                s = 0
                e = 0
                for j in subset:
                    s ^= cols[j]
                    e |= 1 << j
                table.setdefault(s, e)
        return table


def hamming_check(w: int) -> ParityCheck:
    """Columns are the binary expansions of 1..w (least significant bit on top)."""
    if w < 1:
        raise InvalidArgument("w must be >= 1")
    rows = max(1, math.ceil(math.log2(w + 1)))
    return ParityCheck(BitMatrix.from_columns(list(range(1, w + 1)), rows), 3, name=f"hamming({w})")


def bch_degree(w: int, wrap: bool = False) -> int:
    """Smallest m with 2^m - 1 >= w (or 2^m >= w when ``wrap``)."""
    m = 1
    while ((1 << m) if wrap else (1 << m) - 1) < w:
        m += 1
    return m


def bch_check(w: int, t: int, field: FieldParams | None = None, wrap: bool = False) -> ParityCheck:
    """Narrow-sense binary BCH check matrix on ``w`` bits correcting ``t`` errors.

    Block row i holds the m-bit expansions of alpha^((2i+1) j) for columns
    j = 0..w-1, so the matrix has t*m rows.  With ``wrap`` the field is the
    smallest with 2^m >= w, in which case a length 2^m matrix repeats its first
    column as its last; the declared distance is then not guaranteed and the
    result is only meant for extraction chains whose first and last regions
    are stabilizer-trivial.
    """
    if t < 1 or 2 * t > w:
        raise InvalidArgument(f"need 1 <= t <= w/2, got t={t}, w={w}")
    m = bch_degree(w, wrap) if field is None else field.m
    if field is None:
        field = make_field(m)
    if (1 << m) - 1 < w and not wrap:
        raise InvalidArgument(f"GF(2^{m}) is too small for {w} distinct columns")
    cols = []
    for j in range(w):
        c = 0
        for i in range(t):
            c |= alpha_power((2 * i + 1) * j, field).value << (i * m)
        cols.append(c)
    H = BitMatrix.from_columns(cols, t * m)
    return ParityCheck(H, 2 * t + 1, name=f"bch({w},{t})")


def distance_subset_count(w: int, d: int) -> int:
    return sum(math.comb(w, k) for k in range(1, d))


def verify_distance(pc: ParityCheck, d: int | None = None, budget: int = DEFAULT_DISTANCE_BUDGET) -> bool:
    """Exhaustively check that every nonempty set of <= d-1 columns is independent."""
    d = pc.d if d is None else d
    count = distance_subset_count(pc.w, d)
    if count > budget:
        raise ResourceLimit(
            f"distance check needs {count} column subsets (budget {budget})", count, budget
        )
    if d <= 1:
        return True
    if pc.rows <= 64:
        cols = np.array(pc.columns, dtype=np.uint64)
        ok, _, _ = _kernels.independent_upto(cols, d - 1)
        return bool(ok)
    cols = pc.columns
    for k in range(1, d):
        for subset in combinations(cols, k):
            acc = 0
            for c in subset:
                acc ^= c
            if acc == 0:
                return False
    return True


def sort_desc(pc: ParityCheck) -> ParityCheck:
    """Reorder columns in descending order, bottom row most significant."""
    cols = pc.columns
    if any(c == 0 for c in cols):
        raise InvalidArgument("cannot order a matrix with a zero column")
    order = sorted(range(pc.w), key=lambda j: -cols[j])  # bit i is row i, so the bottom row is the high bit
    return ParityCheck(pc.H.select_columns(order), pc.d, name=pc.name)


def decode_classical(pc: ParityCheck, syndrome: BitVector) -> BitVector | None:
    """Minimal-weight error of weight <= t with the given syndrome, or None."""
    if syndrome.length != pc.rows:
        raise InvalidArgument(f"syndrome length {syndrome.length} != {pc.rows} rows")
    e = pc._lookup.get(syndrome.bits)
    return None if e is None else BitVector(pc.w, e)


def read_check(text: str, d: int) -> ParityCheck:
    return ParityCheck(BitMatrix.from_text(text), d)
