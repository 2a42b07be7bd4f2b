"""Repetition grids and brute-force discovery of small flag gadgets."""

from __future__ import annotations

import json
import logging
import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, islice
from typing import Iterator

from .codes import bch_check
from .decode import DEFAULT_BUDGET, CorrectionTable, decodable, verify_ft
from .errors import InvalidArgument, InvalidCircuit, ResourceLimit
from .f2core import BitMatrix
from .faults import fault_count
from .gadget import DataOp, FlagCircuit, Stabilizer, build_gadget

log = logging.getLogger(__name__)

FT, NOT_FT, SKIPPED = "Y", "N", "skipped"


@dataclass
class GridResult:
    w: int
    ts: list[int]
    rs: list[int]
    verdicts: dict[tuple[int, int], str] = field(default_factory=dict)
    fault_sets: dict[tuple[int, int], int] = field(default_factory=dict)

    def verdict(self, t: int, r: int) -> str:
        return self.verdicts[(t, r)]

    def row(self, t: int) -> str:
        return "".join(self.verdicts[(t, r)][0] if self.verdicts[(t, r)] != SKIPPED else "?" for r in self.rs)

    def to_text(self) -> str:
        width = max(len(SKIPPED), 2)
        head = "t\\r".ljust(4) + " ".join(str(r).rjust(width) for r in self.rs)
        lines = [f"w={self.w}", head]
        for t in self.ts:
            cells = " ".join(self.verdicts[(t, r)].rjust(width) for r in self.rs)
            lines.append(str(t).ljust(4) + cells)
        return "\n".join(lines) + "\n"

    def to_kv(self) -> str:
        lines = []
        for t in self.ts:
            for r in self.rs:
                v = self.verdicts[(t, r)]
                lines.append(f"w={self.w} t={t} r={r} verdict={v} fault_sets={self.fault_sets.get((t, r), 0)}")
        return "\n".join(lines) + "\n"


def _grid_cell(args: tuple[int, int, int, int, str]) -> tuple[int, int, str, int]:
    w, t, r, budget, flip_order = args
    c = build_gadget(bch_check(w, t), r, flip_order=flip_order)
    n = fault_count(c, t)
    try:
        res = decodable(c, t, budget=budget)
    except ResourceLimit:
        return t, r, SKIPPED, n
    return t, r, FT if res.ok else NOT_FT, n


def min_reps_grid(
    w: int,
    t_max: int,
    r_max: int,
    budget: int = DEFAULT_BUDGET,
    r_min: int = 2,
    jobs: int = 1,
    checkpoint: str | os.PathLike | None = None,
    flip_order: str = "formula",
) -> GridResult:
    """FT verdict of the sorted, stacked, unfolded BCH gadget for each (t, r).

    Cells whose fault enumeration exceeds ``budget`` are reported as skipped.
    With ``checkpoint`` finished cells are stored as JSON and reused.
    """
    if t_max < 1 or r_max < r_min or r_min < 1:
        raise InvalidArgument("need t_max >= 1 and 1 <= r_min <= r_max")
    ts = list(range(1, t_max + 1))
    rs = list(range(r_min, r_max + 1))
    for t in ts:
        bch_check(w, t)  # fail early on impossible (w, t)
    done: dict[str, list] = {}
    if checkpoint and os.path.exists(checkpoint):
        with open(checkpoint) as fh:
            done = json.load(fh)
    result = GridResult(w, ts, rs)
    todo = []
    for t in ts:
        for r in rs:
            key = f"{w},{t},{r},{flip_order}"
            if key in done and done[key][0] != SKIPPED:
                result.verdicts[(t, r)], result.fault_sets[(t, r)] = done[key]
            else:
                todo.append((w, t, r, budget, flip_order))

    def record(cell: tuple[int, int, str, int]) -> None:
        t, r, v, n = cell
        result.verdicts[(t, r)] = v
        result.fault_sets[(t, r)] = n
        log.info("w=%d t=%d r=%d -> %s (%d fault sets)", w, t, r, v, n)
        if checkpoint:
            done[f"{w},{t},{r},{flip_order}"] = [v, n]
            tmp = f"{checkpoint}.tmp"
            with open(tmp, "w") as fh:
                json.dump(done, fh, indent=1, sort_keys=True)
            os.replace(tmp, checkpoint)

    # light cells first so a checkpoint captures as much as possible
    todo.sort(key=lambda a: (a[1], a[2]))
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for cell in pool.map(_grid_cell, todo):
                record(cell)
    else:
        for args in todo:
            record(_grid_cell(args))
    return result


@dataclass(frozen=True)
class SearchHit:
    circuit: FlagCircuit
    table: CorrectionTable
    index: int  # position of the circuit in canonical candidate order


def _flag_labelings(slots: int, f: int) -> Iterator[tuple[int, ...]]:
    """Restricted growth strings: flag labels numbered by first use."""
    if slots == 0:
        if f == 0:
            yield ()
        return
    if f == 0:
        return

    def rec(prefix: list[int], top: int) -> Iterator[tuple[int, ...]]:
        if len(prefix) == slots:
            if top == f:
                yield tuple(prefix)
            return
        remaining = slots - len(prefix)
        if f - top > remaining:
            return
        for lab in range(min(top + 1, f)):
            prefix.append(lab)
            yield from rec(prefix, max(top, lab + 1))
            prefix.pop()

    yield from rec([], 0)


def candidate_count(w: int, f: int, n_slots: int) -> int:
    k = n_slots - w
    # Stirling numbers of the second kind count labelings using every flag
    stirling = sum((-1) ** j * math.comb(f, j) * (f - j) ** k for j in range(f + 1)) // math.factorial(f)
    return math.comb(n_slots, w) * stirling


def _candidate(w: int, f: int, n_slots: int, data_cols: tuple[int, ...], labels: tuple[int, ...], even: bool) -> FlagCircuit | None:
    rows = [0] * (f + 1)
    it = iter(labels)
    data = set(data_cols)
    for j in range(n_slots):
        if j in data:
            rows[f] |= 1 << j
        else:
            rows[next(it)] |= 1 << j
    if even and any(bin(r).count("1") % 2 for r in rows[:f]):
        return None
    ops = tuple(DataOp(col, q, "X") for q, col in enumerate(data_cols))
    try:
        return FlagCircuit(BitMatrix(f + 1, n_slots, tuple(rows)), ops, Stabilizer.all_x(w), require_even=even)
    except InvalidCircuit:
        return None


def _ordered_candidates(w: int, f: int, n_slots: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    labelings = list(_flag_labelings(n_slots - w, f))
    for data_cols in combinations(range(n_slots), w):
        for labels in labelings:
            yield data_cols, labels


def _evaluate(args) -> tuple[int, FlagCircuit, CorrectionTable] | None:
    w, t, f, n_slots, even, batch = args
    for idx, data_cols, labels in batch:
        c = _candidate(w, f, n_slots, data_cols, labels, even)
        if c is None:
            continue
        res = decodable(c, t)
        if res.ok and verify_ft(c, t, res.table).ok:
            return idx, c, res.table
    return None


def search_small(
    w: int,
    t: int,
    f: int,
    n_slots: int,
    seed: int = 0,
    budget: int = 1_000_000,
    even_flags: bool | None = None,
    jobs: int = 1,
) -> SearchHit | None:
    """First flag circuit, in canonical candidate order, whose decodable table
    also passes ``verify_ft``.

    Candidates place ``w`` data CNOTs among ``n_slots`` columns and give each
    remaining column to a flag, with flags labelled in order of first use.
    All candidates are tried when there are at most ``budget`` of them;
    otherwise ``budget`` distinct candidates are drawn with a seeded generator.
    ``even_flags=None`` asks for even flag rows only when the flag columns
    can be split that way (``n_slots - w`` even).
    """
    if n_slots < w or w < 1 or f < 0 or t < 0:
        raise InvalidArgument("need w >= 1, f >= 0, t >= 0 and n_slots >= w")
    if even_flags is None:
        even_flags = (n_slots - w) % 2 == 0
    total = candidate_count(w, f, n_slots)
    if total <= budget:
        stream = ((i, d, lab) for i, (d, lab) in enumerate(_ordered_candidates(w, f, n_slots)))
    else:
        stream = _random_candidates(w, f, n_slots, seed, budget)
    chunk = 64
    batches = iter(lambda: list(islice(stream, chunk)), [])
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            window = []
            for batch in batches:
                window.append(batch)
                if len(window) == jobs:
                    hit = _first_hit(pool.map(_evaluate, [(w, t, f, n_slots, even_flags, b) for b in window]))
                    if hit:
                        return hit
                    window = []
            if window:
                return _first_hit(pool.map(_evaluate, [(w, t, f, n_slots, even_flags, b) for b in window]))
        return None
    for batch in batches:
        hit = _first_hit([_evaluate((w, t, f, n_slots, even_flags, batch))])
        if hit:
            return hit
    return None


def _first_hit(results) -> SearchHit | None:
    for r in results:  # batches arrive in candidate order
        if r is not None:
            return SearchHit(r[1], r[2], r[0])
    return None


def _random_candidates(w: int, f: int, n_slots: int, seed: int, budget: int):
    rng = random.Random(seed)
    seen = set()
    attempts = 0
    while len(seen) < budget and attempts < 20 * budget:
        attempts += 1
        data_cols = tuple(sorted(rng.sample(range(n_slots), w)))
        raw = [rng.randrange(f) for _ in range(n_slots - w)] if f else []
        relabel: dict[int, int] = {}
        labels = tuple(relabel.setdefault(x, len(relabel)) for x in raw)
        if len(relabel) != f and n_slots > w:
            continue
        key = (data_cols, labels)
        if key in seen:
            continue
        seen.add(key)
        yield len(seen) - 1, data_cols, labels
