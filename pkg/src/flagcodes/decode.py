"""Recovery maps from flag patterns to data corrections.

Three routes are provided: the minimal-weight (argmin) table, the Hamming-ball
intersection test that decides whether any valid table exists, and the
majority-vote decoder for circuits built from (t+1)^2 repetitions.
``verify_ft`` checks a table against every fault set independently of how it
was built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Mapping, Sequence

import numpy as np

from . import _kernels
from .codes import ParityCheck, decode_classical
from .errors import InvalidArgument, ResourceLimit, UndecodableSubpattern
from .f2core import BitVector, int_to_words, nwords, words_to_int
from .faults import DataError, FaultSet, FlagPattern, canonical, fault_count, residual_weight
from .gadget import FlagCircuit

DEFAULT_BUDGET = 50_000_000
DECODERS = ("brute", "majority", "ball", "manual")


class CorrectionTable:
    """Sorted array map from flag pattern to canonical data correction.

    Patterns absent from the table decode to the identity; ``lookup`` reports
    whether the pattern was present so callers can detect > t faults.
    """

    def __init__(self, f: int, w: int, t: int, decoder: str, keys: np.ndarray, corr: np.ndarray) -> None:
        if keys.shape[0] != corr.shape[0]:
            raise InvalidArgument("keys and corrections differ in length")
        self.f = f
        self.w = w
        self.t = t
        self.decoder = decoder
        self.keys = np.ascontiguousarray(keys, dtype=np.uint64)
        self.corr = np.ascontiguousarray(corr, dtype=np.uint64)

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int], f: int, w: int, t: int, decoder: str = "manual") -> CorrectionTable:
        pw, dw = nwords(f), nwords(w)
        items = sorted(mapping.items())
        keys = np.zeros((len(items), pw), dtype=np.uint64)
        corr = np.zeros((len(items), dw), dtype=np.uint64)
        for i, (p, x) in enumerate(items):
            if p >> f or x >> w:
                raise InvalidArgument("pattern or correction wider than the circuit")
            keys[i] = int_to_words(p, pw)
            corr[i] = int_to_words(canonical(x, w), dw)
        return cls(f, w, t, decoder, keys, corr)

    def __len__(self) -> int:
        return self.keys.shape[0]

    def lookup(self, pattern: int) -> tuple[int, bool]:
        row = _kernels.find_row(self.keys, int_to_words(pattern, self.keys.shape[1]))
        if row < 0:
            return 0, False
        return words_to_int(self.corr[row]), True

    def __getitem__(self, pattern: int | BitVector | FlagPattern) -> int:
        if isinstance(pattern, FlagPattern):
            pattern = pattern.bits
        if isinstance(pattern, BitVector):
            pattern = pattern.bits
        return self.lookup(pattern)[0]

    def __contains__(self, pattern: int) -> bool:
        return self.lookup(pattern)[1]

    def entries(self) -> Iterator[tuple[int, int]]:
        for i in range(len(self)):
            yield words_to_int(self.keys[i]), words_to_int(self.corr[i])

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CorrectionTable):
            return NotImplemented
        return (
            (self.f, self.w, self.t) == (other.f, other.w, other.t)
            and np.array_equal(self.keys, other.keys)
            and np.array_equal(self.corr, other.corr)
        )

    def to_text(self, c: FlagCircuit) -> str:
        lines = [f"t={self.t} decoder={self.decoder}"]
        for p, x in self.entries():
            bits = "".join(str((p >> i) & 1) for i in range(self.f))
            if x == 0:
                rhs = "I"
            else:
                rhs = ",".join(
                    f"{c.data_ops[k].qubit}:{c.data_ops[k].pauli}" for k in range(self.w) if (x >> k) & 1
                )
            lines.append(f"{bits} -> {rhs}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, c: FlagCircuit) -> CorrectionTable:
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise InvalidArgument("empty correction table")
        try:
            header = dict(tok.split("=", 1) for tok in lines[0].split())
            t = int(header["t"])
            decoder = header.get("decoder", "manual")
        except (KeyError, ValueError) as exc:
            raise InvalidArgument(f"bad table header {lines[0]!r}") from exc
        slot_of = {}
        for k, op in enumerate(c.data_ops):
            slot_of.setdefault((op.qubit, op.pauli), k)
        mapping = {}
        for ln in lines[1:]:
            lhs, sep, rhs = ln.partition("->")
            lhs, rhs = lhs.strip(), rhs.strip()
            if not sep or len(lhs) != c.f or any(ch not in "01" for ch in lhs):
                raise InvalidArgument(f"bad table line {ln!r}")
            p = sum(1 << i for i, ch in enumerate(lhs) if ch == "1")
            x = 0
            if rhs != "I":
                for tok in rhs.split(","):
                    q, _, pauli = tok.strip().partition(":")
                    key = (int(q), pauli)
                    if key not in slot_of:
                        raise InvalidArgument(f"no data CNOT applies {pauli} to qubit {q}")
                    x ^= 1 << slot_of[key]
            mapping[p] = x
        return cls.from_mapping(mapping, c.f, c.w, t, decoder)


@dataclass(frozen=True)
class Counterexample:
    fault_set: FaultSet
    pattern: FlagPattern
    correction: DataError
    residual: int


@dataclass(frozen=True)
class FtVerdict:
    ok: bool
    counterexample: Counterexample | None = None
    checked: int = 0
    missing: int = 0  # fault sets whose pattern had no table entry

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class Decodability:
    """Outcome of the ball-intersection test; unpacks as ``(ok, table)``."""

    ok: bool
    table: CorrectionTable | None
    failing_pattern: int | None = None
    fault_sets: int = 0
    classes: int = 0

    def __iter__(self):
        return iter((self.ok, self.table))


def _check_budget(c: FlagCircuit, t: int, budget: int) -> int:
    if t < 0:
        raise InvalidArgument("t must be non-negative")
    count = fault_count(c, t)
    if count > budget:
        raise ResourceLimit(f"{count} fault sets exceed the budget of {budget}", count, budget)
    return count


def between_pairs_mask(c: FlagCircuit) -> int:
    """Suffix start positions lying between the two data CNOTs of a pair.

    A correction obeys the restricted rule when it is a sum of suffixes
    starting at these positions, up to the full stabilizer.
    """
    slots = region_slots(c) if c.pairs else []
    return sum(1 << (p + 1) for p in slots)


def in_restricted_span(x: int, c: FlagCircuit) -> bool:
    allowed = between_pairs_mask(c)
    full = c.full_mask
    for y in (x, x ^ full):
        if ((y ^ (y << 1)) & full & ~allowed) == 0:
            return True
    return False


@dataclass
class _Classes:
    pat: np.ndarray
    dat: np.ndarray
    wt: np.ndarray
    order: np.ndarray
    starts: np.ndarray
    full: np.ndarray = field(repr=False)

    @property
    def n_classes(self) -> int:
        return self.starts.shape[0] - 1

    def keys(self) -> np.ndarray:
        return self.pat[self.order[self.starts[:-1]]]


def _classes(c: FlagCircuit, t: int, budget: int, data_masks: Sequence[int] | None = None) -> _Classes:
    _check_budget(c, t, budget)
    loc_pat, loc_dat = c.location_arrays(data_masks)
    full = int_to_words(c.full_mask, loc_dat.shape[1])
    pat, dat, wt = _kernels.enumerate_arrays(loc_pat, loc_dat, t, full, c.w)
    if pat.shape[1] == 1:
        order = np.argsort(pat[:, 0], kind="stable")
    else:
        order = np.lexsort(tuple(pat[:, k] for k in range(pat.shape[1])))
    starts = _kernels.group_bounds(pat[order])
    return _Classes(pat, dat, wt, order.astype(np.int64), starts, full)


def _ball(w: int, radius: int) -> tuple[np.ndarray, np.ndarray]:
    """Every mask of weight <= radius, ordered by (weight, value)."""
    dw = nwords(w)
    masks = []
    weights = []
    for k in range(min(radius, w) + 1):
        group = sorted(sum(1 << i for i in s) for s in combinations(range(w), k))
        masks.extend(group)
        weights.extend([k] * len(group))
    arr = np.zeros((len(masks), dw), dtype=np.uint64)
    for i, m in enumerate(masks):
        arr[i] = int_to_words(m, dw)
    return arr, np.array(weights, dtype=np.int64)


def build_table_bruteforce(
    c: FlagCircuit, t: int, budget: int = DEFAULT_BUDGET, restricted: bool | None = None
) -> CorrectionTable:
    """Each pattern maps to the data error of its first minimal-weight fault set.

    With ``restricted`` (the default for circuits with paired data CNOTs) every
    correction component must sit between the two CNOTs of a pair: the argmin
    correction is kept when it already has that form, otherwise the nearest
    admissible correction consistent with the whole class is used.  Classes
    with no admissible correction keep the argmin so that ``verify_ft``
    reports them.
    """
    if restricted is None:
        restricted = bool(c.pairs)
    cl = _classes(c, t, budget)
    first = cl.order[cl.starts[:-1]]
    if not restricted:
        return CorrectionTable(c.f, c.w, t, "brute", cl.keys(), cl.dat[first])
    ok, corr, _ = _decide(c, cl, t, stop_on_fail=False, restricted=True)
    return CorrectionTable(c.f, c.w, t, "brute", cl.keys(), corr)


def _decide(c: FlagCircuit, cl: _Classes, t: int, stop_on_fail: bool, restricted: bool):
    ball, ball_wt = _ball(c.w, t)
    allowed = int_to_words(between_pairs_mask(c), cl.dat.shape[1])
    return _kernels.decide_groups(
        cl.order, cl.starts, cl.dat, cl.wt, ball, ball_wt, cl.full, c.w, stop_on_fail, restricted, allowed
    )


def decodable(
    c: FlagCircuit, t: int, budget: int = DEFAULT_BUDGET, stop_on_fail: bool = True, restricted: bool = False
) -> Decodability:
    """Intersect, per pattern class, the balls B_|e|(data(e)) up to the stabilizer.

    The chosen correction is the intersection member nearest the class's
    minimal-weight data error; ties go to the smallest canonical value.
    ``restricted`` limits the candidates to corrections applied between the
    CNOTs of each data pair.
    """
    cl = _classes(c, t, budget)
    ok, corr, done = _decide(c, cl, t, stop_on_fail, restricted)
    n = cl.n_classes
    keys = cl.keys()
    bad = np.flatnonzero(~ok[:done])
    if bad.size:
        return Decodability(False, None, words_to_int(keys[bad[0]]), cl.pat.shape[0], n)
    return Decodability(True, CorrectionTable(c.f, c.w, t, "ball", keys, corr), None, cl.pat.shape[0], n)


def verify_ft(c: FlagCircuit, t: int, table: CorrectionTable, budget: int = DEFAULT_BUDGET) -> FtVerdict:
    """Check min(|D e_s + R(P)|, w - |...|) <= t_s + t_f for every fault set of weight <= t."""
    if (table.f, table.w) != (c.f, c.w):
        raise InvalidArgument("table shape does not match the circuit")
    _check_budget(c, t, budget)
    loc_pat, loc_dat = c.location_arrays()
    keys = table.keys
    if keys.shape[0] == 0:
        keys = np.zeros((0, loc_pat.shape[1]), dtype=np.uint64)
    idx, res, row, missing, checked = _kernels.verify_kernel(loc_pat, loc_dat, t, keys, table.corr, c.w)
    if res < 0:
        return FtVerdict(True, None, int(checked), int(missing))
    fs = FaultSet.from_locations([int(i) for i in idx], c.l)
    pat = 0
    for g in fs.syndrome_gaps:
        pat ^= c.fc_columns[g]
    for i in fs.flag_flips:
        pat ^= 1 << i
    x = words_to_int(table.corr[row]) if row >= 0 else 0
    cex = Counterexample(
        fs, FlagPattern(BitVector(c.f, pat)), DataError(BitVector(c.w, x), c.stabilizer.letters), int(res)
    )
    return FtVerdict(False, cex, int(checked), int(missing))


def region_slots(c: FlagCircuit) -> list[int]:
    """First data slot of each flagged region (one region per H column)."""
    if c.pairs:
        cols = [op.column for op in c.data_ops]
        return [cols.index(a) for a, _ in c.pairs]
    return list(range(c.w))


def majority_decode(pattern: FlagPattern | BitVector | int, H: ParityCheck, t: int, c: FlagCircuit) -> DataError:
    """Decode the most frequent length-h block of the pattern with H's lookup decoder.

    Classical error bit j becomes a correction on every data CNOT after the
    one in region j.  ``H`` must be the (sorted) matrix the circuit was built from.
    """
    if isinstance(pattern, FlagPattern):
        pattern = pattern.bits
    if isinstance(pattern, BitVector):
        pattern = pattern.bits
    h = H.rows
    if c.f % h:
        raise InvalidArgument(f"{c.f} flags is not a multiple of {h} check rows")
    r = c.f // h
    if r < (t + 1) ** 2:
        raise InvalidArgument(f"majority decoding needs (t+1)^2 = {(t + 1) ** 2} repetitions, got {r}")
    slots = region_slots(c)
    if len(slots) != H.w:
        raise InvalidArgument("circuit regions do not match the columns of H")
    mask = (1 << h) - 1
    blocks = [(pattern >> (b * h)) & mask for b in range(r)]
    counts: dict[int, int] = {}
    for s in blocks:
        counts[s] = counts.get(s, 0) + 1
    best = max(counts.values())
    winner = next(s for s in blocks if counts[s] == best)  # earliest among the most frequent
    e = decode_classical(H, BitVector(h, winner))
    if e is None:
        raise UndecodableSubpattern(f"subpattern {BitVector(h, winner)} has no error of weight <= {H.t}")
    x = 0
    for j in e.support():
        p = slots[j]
        x ^= c.full_mask & ~((1 << (p + 1)) - 1)
    return DataError(BitVector(c.w, canonical(x, c.w)), c.stabilizer.letters)


def build_table_majority(c: FlagCircuit, H: ParityCheck, t: int, budget: int = DEFAULT_BUDGET) -> CorrectionTable:
    """Majority corrections for every pattern reachable by <= t faults."""
    cl = _classes(c, t, budget)
    keys = cl.keys()
    dw = nwords(c.w)
    corr = np.zeros((keys.shape[0], dw), dtype=np.uint64)
    for i in range(keys.shape[0]):
        corr[i] = int_to_words(majority_decode(words_to_int(keys[i]), H, t, c).support.bits, dw)
    return CorrectionTable(c.f, c.w, t, "majority", keys, corr)


def pattern_classes(c: FlagCircuit, t: int, budget: int = DEFAULT_BUDGET) -> dict[int, list[tuple[int, int]]]:
    """Pattern -> distinct (canonical data error, minimal fault weight) pairs; small circuits only."""
    cl = _classes(c, t, budget)
    out: dict[int, dict[int, int]] = {}
    for g in range(cl.n_classes):
        rows = cl.order[cl.starts[g] : cl.starts[g + 1]]
        p = words_to_int(cl.pat[rows[0]])
        members = out.setdefault(p, {})
        for r in rows:
            d = words_to_int(cl.dat[r])
            k = int(cl.wt[r])
            if d not in members or k < members[d]:
                members[d] = k
    return {p: sorted(m.items()) for p, m in out.items()}


def exists_valid_correction(members: Sequence[tuple[int, int]], w: int) -> int | None:
    """Exhaustive search over all 2^w corrections; returns the smallest valid one."""
    for x in range(1 << w):
        if all(residual_weight(x ^ d, w) <= k for d, k in members):
            return x
    return None


def enumeration_size(l: int, f: int, t: int) -> int:  # noqa: E741
    return sum(math.comb(l + f, k) for k in range(t + 1))
