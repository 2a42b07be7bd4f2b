"""Flag-gadget circuits.

A circuit is a matrix ``C`` whose columns are time steps on the syndrome
qubit: rows ``0..f-1`` are flag qubits and row ``f`` marks data CNOTs.
Faults live in gaps; gap ``j`` precedes column ``j`` and gap ``n`` follows the
last column, so a circuit with ``n`` columns has ``l = n + 1`` gaps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .codes import ParityCheck
from .errors import InvalidArgument, InvalidCircuit, OrderingViolation
from .f2core import BitMatrix, BitVector, int_to_words, nwords, parse_matrix_lines, popcount, suffix_xor

PAULI_LETTERS = "IXYZ"
FLIP_ORDERS = ("formula", "paper-fig5")


@dataclass(frozen=True)
class Stabilizer:
    paulis: str

    def __post_init__(self) -> None:
        if any(ch not in PAULI_LETTERS for ch in self.paulis):
            raise InvalidArgument(f"bad Pauli string {self.paulis!r}")
        if self.w < 1:
            raise InvalidArgument("stabilizer must have at least one non-identity factor")

    @classmethod
    def all_x(cls, w: int) -> Stabilizer:
        return cls("X" * w)

    @property
    def n(self) -> int:
        return len(self.paulis)

    @property
    def w(self) -> int:
        return sum(ch != "I" for ch in self.paulis)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, ch in enumerate(self.paulis) if ch != "I")

    @property
    def letters(self) -> str:
        return "".join(ch for ch in self.paulis if ch != "I")

    def __str__(self) -> str:
        return self.paulis


@dataclass(frozen=True)
class DataOp:
    """A controlled-Pauli from the syndrome qubit at circuit column ``column``."""

    column: int
    qubit: int
    pauli: str


@dataclass(frozen=True)
class IdealGadget:
    F: BitMatrix
    H: ParityCheck
    reps: int

    @property
    def data_regions(self) -> int:
        return self.F.cols


@dataclass(frozen=True)
class FlagCircuit:
    C: BitMatrix
    data_ops: tuple[DataOp, ...]
    stabilizer: Stabilizer
    require_even: bool = field(default=True, compare=False)

    def __post_init__(self) -> None:
        if self.C.rows < 1:
            raise InvalidCircuit("circuit matrix needs a data row")
        for j, col in enumerate(self.C.column_ints()):
            if popcount(col) != 1:
                raise InvalidCircuit(f"column {j} has {popcount(col)} CNOTs; serial circuits need exactly 1")
        data_row = self.C.data[self.f]
        cols = [op.column for op in self.data_ops]
        if cols != sorted(cols) or len(set(cols)) != len(cols):
            raise InvalidCircuit("data CNOTs must be listed in time order")
        if sum(1 << c for c in cols) != data_row:
            raise InvalidCircuit("data CNOT tags do not match the data row")
        if self.stabilizer.w != len(self.data_ops):
            raise InvalidCircuit(
                f"data row weight {len(self.data_ops)} != stabilizer weight {self.stabilizer.w}"
            )
        if "".join(op.pauli for op in self.data_ops) != self.stabilizer.letters:
            raise InvalidCircuit("data CNOT Paulis disagree with the stabilizer")
        if self.require_even:
            for i in range(self.f):
                if popcount(self.C.data[i]) % 2:
                    raise InvalidCircuit(f"flag row {i} has odd weight")

    @property
    def f(self) -> int:
        return self.C.rows - 1

    @property
    def n(self) -> int:
        return self.C.cols

    @property
    def l(self) -> int:  # noqa: E743
        return self.n + 1

    @property
    def w(self) -> int:
        return len(self.data_ops)

    @property
    def data_row(self) -> int:
        return self.f

    @cached_property
    def Fc(self) -> BitMatrix:
        return fc_from_circuit(self.C, self.f)

    @cached_property
    def fc_columns(self) -> tuple[int, ...]:
        return tuple(self.Fc.column_ints())

    @cached_property
    def gap_data_masks(self) -> tuple[int, ...]:
        """Data slots hit by an X fault in each gap (slots at columns >= gap)."""
        masks = []
        cols = [op.column for op in self.data_ops]
        for g in range(self.l):
            m = 0
            for k, c in enumerate(cols):
                if c >= g:
                    m |= 1 << k
            masks.append(m)
        return tuple(masks)

    @property
    def full_mask(self) -> int:
        return (1 << self.w) - 1

    @cached_property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        """Adjacent data-CNOT columns, as produced by data doubling."""
        cols = [op.column for op in self.data_ops]
        out = []
        k = 0
        while k + 1 < len(cols):
            if cols[k + 1] == cols[k] + 1:
                out.append((cols[k], cols[k + 1]))
                k += 2
            else:
                k += 1
        return tuple(out)

    @property
    def flag_cnots(self) -> int:
        return self.n - self.w

    def location_arrays(self, data_masks: Sequence[int] | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Per-location pattern/data words: gaps first, then one flip per flag."""
        data_masks = self.gap_data_masks if data_masks is None else data_masks
        pw = nwords(self.f)
        dw = nwords(self.w)
        L = self.l + self.f
        pat = np.zeros((L, pw), dtype=np.uint64)
        dat = np.zeros((L, dw), dtype=np.uint64)
        for g in range(self.l):
            pat[g] = int_to_words(self.fc_columns[g], pw)
            dat[g] = int_to_words(data_masks[g], dw)
        for i in range(self.f):
            pat[self.l + i] = int_to_words(1 << i, pw)
        return pat, dat

    def slot_qubits_unique(self) -> bool:
        qs = [op.qubit for op in self.data_ops]
        return len(set(qs)) == len(qs)


def stack(H: ParityCheck, r: int) -> IdealGadget:
    if r < 1:
        raise InvalidArgument("need at least one repetition")
    h = H.rows
    cols = [sum(c << (b * h) for b in range(r)) for c in H.columns]
    return IdealGadget(BitMatrix.from_columns(cols, h * r), H, r)


def _flip_bits(diff: int, rows: int, flip_order: str) -> list[int]:
    bits = [k for k in range(rows) if (diff >> k) & 1]
    if flip_order == "paper-fig5":
        bits.reverse()
    elif flip_order != "formula":
        raise InvalidArgument(f"unknown flip order {flip_order!r}; choose from {FLIP_ORDERS}")
    return bits


def unfolded_columns(F: BitMatrix, flip_order: str = "formula") -> BitMatrix:
    """The distinct flag states from the first pure column to the trailing zero.

    Each pure column ``F_i`` is followed by single-bit-flip transition columns
    toward ``F_{i+1}`` (and toward zero after the last column).
    """
    cols = F.column_ints()
    if not cols:
        return BitMatrix.zeros(F.rows, 0)
    cur = cols[0]
    states = [cur]
    for i in range(len(cols)):
        target = cols[i + 1] if i + 1 < len(cols) else 0
        for k in _flip_bits(cur ^ target, F.rows, flip_order):
            cur ^= 1 << k
            states.append(cur)
    return BitMatrix.from_columns(states, F.rows)


def unfold(G: IdealGadget, stab: Stabilizer, flip_order: str = "formula") -> FlagCircuit:
    """Turn a stacked check matrix into a serial flag circuit.

    One data CNOT sits right after each pure column, before the transition
    toward the next column.
    """
    F = G.F
    if F.cols != stab.w:
        raise InvalidArgument(f"F has {F.cols} columns but the stabilizer has weight {stab.w}")
    f = F.rows
    cols = F.column_ints()
    c_rows = [0] * (f + 1)
    data_ops = []
    support = stab.support
    letters = stab.letters
    n = 0
    cur = 0
    for i, target in enumerate(cols + [0]):
        src = cur
        for k in _flip_bits(cur ^ target, f, flip_order):
            cur ^= 1 << k
            if cur == 0 and src != 0 and target != 0:
                raise OrderingViolation(
                    f"transition between columns {i - 1} and {i} passes through zero; sort the check matrix first"
                )
            c_rows[k] |= 1 << n
            n += 1
        if i < len(cols):
            c_rows[f] |= 1 << n
            data_ops.append(DataOp(n, support[i], letters[i]))
            n += 1
    C = BitMatrix(f + 1, n, tuple(c_rows))
    return FlagCircuit(C, tuple(data_ops), stab)


def fc_from_circuit(C: BitMatrix, data_row: int) -> BitMatrix:
    """Suffix XOR of each flag row plus the trailing post-circuit gap."""
    for j, col in enumerate(C.column_ints()):
        if popcount(col) != 1:
            raise InvalidCircuit(f"column {j} has weight {popcount(col)}, expected 1")
    rows = []
    for i in range(C.rows):
        if i == data_row:
            continue
        rows.append(suffix_xor(C.row(i)).bits)  # trailing gap bit stays 0
    return BitMatrix(len(rows), C.cols + 1, tuple(rows))


def double_data(c: FlagCircuit) -> FlagCircuit:
    """Place two data CNOTs, on distinct qubits, in every data region."""
    if c.pairs:
        raise InvalidArgument("circuit already has paired data CNOTs")
    f = c.f
    data_cols = {op.column: op for op in c.data_ops}
    c_rows = [0] * (f + 1)
    ops = []
    n = 0
    for j in range(c.n):
        if j in data_cols:
            op = data_cols[j]
            for half in (0, 1):
                c_rows[f] |= 1 << n
                ops.append(DataOp(n, 2 * op.qubit + half, op.pauli))
                n += 1
        else:
            row = c.C.column_int(j).bit_length() - 1
            c_rows[row] |= 1 << n
            n += 1
    stab = Stabilizer("".join(ch * 2 for ch in c.stabilizer.paulis))
    return FlagCircuit(BitMatrix(f + 1, n, tuple(c_rows)), tuple(ops), stab)


def build_gadget(H: ParityCheck, reps: int, stab: Stabilizer | None = None, flip_order: str = "formula") -> FlagCircuit:
    from .codes import sort_desc

    Hs = sort_desc(H)
    return unfold(stack(Hs, reps), stab or Stabilizer.all_x(H.w), flip_order)


def partial_subcolumns(col: int, H: ParityCheck, reps: int) -> int:
    """Number of row blocks of a stacked column that are neither zero nor a column of H."""
    h = H.rows
    mask = (1 << h) - 1
    hcols = set(H.columns)
    count = 0
    for b in range(reps):
        sub = (col >> (b * h)) & mask
        if sub and sub not in hcols:
            count += 1
    return count


def circuit_to_text(c: FlagCircuit) -> str:
    lines = [f"flags={c.f} cols={c.n} w={c.w}", c.C.to_text().rstrip("\n")]
    lines.append(f"paulis={c.stabilizer.paulis}")
    lines.append("data_gaps=" + ",".join(f"{op.column}:{op.qubit}:{op.pauli}" for op in c.data_ops))
    return "\n".join(lines) + "\n"


def circuit_from_text(text: str, require_even: bool = False) -> FlagCircuit:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise InvalidArgument("empty circuit file")
    try:
        header = dict(tok.split("=", 1) for tok in lines[0].split())
        f, n, w = int(header["flags"]), int(header["cols"]), int(header["w"])
    except (KeyError, ValueError) as exc:
        raise InvalidArgument(f"bad circuit header {lines[0]!r}") from exc
    C, used = parse_matrix_lines(lines[1:])
    if (C.rows, C.cols) != (f + 1, n):
        raise InvalidArgument(f"matrix shape {C.rows}x{C.cols} disagrees with header")
    rest = {}
    for ln in lines[1 + used :]:
        key, _, val = ln.partition("=")
        rest[key.strip()] = val.strip()
    if "paulis" not in rest or "data_gaps" not in rest:
        raise InvalidArgument("circuit file needs paulis= and data_gaps= lines")
    ops = []
    for tok in filter(None, rest["data_gaps"].split(",")):
        col, qubit, pauli = tok.split(":")
        ops.append(DataOp(int(col), int(qubit), pauli))
    c = FlagCircuit(C, tuple(ops), Stabilizer(rest["paulis"]), require_even=require_even)
    if c.w != w:
        raise InvalidArgument(f"header w={w} but the circuit has {c.w} data CNOTs")
    return c


def flag_pattern_of_gap(c: FlagCircuit, gap: int) -> BitVector:
    return BitVector(c.f, c.fc_columns[gap])
