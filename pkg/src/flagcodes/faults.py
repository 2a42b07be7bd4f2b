"""Fault sets on a flag circuit and their propagation.

A fault location is either a gap (an X error on the syndrome qubit) or a flag
qubit (a flipped flag outcome).  Locations are numbered gaps first
(``0..l-1``) then flags (``l..l+f-1``); fault sets are enumerated by size and
then lexicographically on those numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

from .errors import InvalidArgument
from .f2core import BitVector, popcount
from .gadget import FlagCircuit


@dataclass(frozen=True)
class FaultSet:
    syndrome_gaps: frozenset[int] = frozenset()
    flag_flips: frozenset[int] = frozenset()

    @classmethod
    def of(cls, gaps=(), flags=()) -> FaultSet:
        return cls(frozenset(gaps), frozenset(flags))

    @classmethod
    def from_locations(cls, locations, l: int) -> FaultSet:  # noqa: E741
        gaps = [x for x in locations if x < l]
        flags = [x - l for x in locations if x >= l]
        return cls(frozenset(gaps), frozenset(flags))

    @property
    def t_s(self) -> int:
        return len(self.syndrome_gaps)

    @property
    def t_f(self) -> int:
        return len(self.flag_flips)

    @property
    def k(self) -> int:
        return self.t_s + self.t_f

    def locations(self, l: int) -> tuple[int, ...]:  # noqa: E741
        return tuple(sorted(self.syndrome_gaps)) + tuple(l + i for i in sorted(self.flag_flips))

    def __str__(self) -> str:
        gaps = ",".join(map(str, sorted(self.syndrome_gaps)))
        flags = ",".join(map(str, sorted(self.flag_flips)))
        return f"gaps[{gaps}] flags[{flags}]"


@dataclass(frozen=True)
class FlagPattern:
    bits: BitVector

    def __str__(self) -> str:
        return str(self.bits)


def residual_weight(x: int, w: int) -> int:
    """Weight of ``x`` up to the full stabilizer: min(|x|, w - |x|)."""
    p = popcount(x)
    return min(p, w - p)


def canonical(x: int, w: int) -> int:
    """Lighter of ``x`` and its stabilizer complement; ties go to the smaller integer."""
    y = x ^ ((1 << w) - 1)
    px = popcount(x)
    py = w - px
    if py < px or (py == px and y < x):
        return y
    return x


@dataclass(frozen=True)
class DataError:
    """Support over the stabilizer's data CNOT slots, with the Pauli of each slot."""

    support: BitVector
    paulis: str

    def __post_init__(self) -> None:
        if len(self.paulis) != self.support.length:
            raise InvalidArgument("one Pauli letter per slot is required")

    @property
    def w(self) -> int:
        return self.support.length

    @property
    def weight(self) -> int:
        return self.support.weight

    def canonical(self) -> DataError:
        return DataError(BitVector(self.w, canonical(self.support.bits, self.w)), self.paulis)

    def residual(self, other: DataError | None = None) -> int:
        x = self.support.bits ^ (other.support.bits if other is not None else 0)
        return residual_weight(x, self.w)

    def equivalent(self, other: DataError) -> bool:
        return canonical(self.support.bits, self.w) == canonical(other.support.bits, other.w)

    def letters(self) -> list[tuple[int, str]]:
        return [(k, self.paulis[k]) for k in self.support.support()]

    def __str__(self) -> str:
        items = self.letters()
        return "I" if not items else "".join(f"{p}{k}" for k, p in items)


def _check(c: FlagCircuit, fs: FaultSet) -> None:
    for g in fs.syndrome_gaps:
        if not 0 <= g < c.l:
            raise InvalidArgument(f"gap {g} out of range 0..{c.l - 1}")
    for i in fs.flag_flips:
        if not 0 <= i < c.f:
            raise InvalidArgument(f"flag {i} out of range 0..{c.f - 1}")


def propagate(c: FlagCircuit, fs: FaultSet) -> tuple[FlagPattern, DataError]:
    _check(c, fs)
    pat = 0
    dat = 0
    for g in fs.syndrome_gaps:
        pat ^= c.fc_columns[g]
        dat ^= c.gap_data_masks[g]
    for i in fs.flag_flips:
        pat ^= 1 << i
    return FlagPattern(BitVector(c.f, pat)), DataError(BitVector(c.w, dat), c.stabilizer.letters)


def fault_count(c: FlagCircuit, t: int) -> int:
    L = c.l + c.f
    return sum(math.comb(L, k) for k in range(t + 1))


def enumerate_faults(c: FlagCircuit, t: int, first: int | None = None) -> Iterator[FaultSet]:
    """Every fault set of total weight <= t, by size then lexicographic location.

    ``first`` restricts the stream to nonempty sets whose smallest location is
    ``first`` (plus nothing else), which partitions the work across workers.
    """
    if t < 0:
        raise InvalidArgument("t must be non-negative")
    L = c.l + c.f
    if first is None:
        for k in range(t + 1):
            for combo in combinations(range(L), k):
                yield FaultSet.from_locations(combo, c.l)
        return
    for k in range(1, t + 1):
        for rest in combinations(range(first + 1, L), k - 1):
            yield FaultSet.from_locations((first,) + rest, c.l)
