"""Connected extraction of many syndromes behind one flag gadget.

All ``s`` rounds of generator measurements are laid out as one long sequence
of data CNOTs (round-major, generator-major, qubit-minor) and protected by a
single flag circuit.  Simulation is Pauli-frame only: Paulis are pairs of
integers ``(x, z)`` with bit q set when the Pauli acts on qubit q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations, product
from typing import Iterable, Sequence

import numpy as np

from .codes import bch_check, sort_desc
from .decode import CorrectionTable, build_table_bruteforce
from .errors import InvalidArgument, OrderingViolation
from .faults import FaultSet, fault_count
from .gadget import DataOp, FlagCircuit, Stabilizer, stack, unfold

Pauli = tuple[int, int]
MODES = ("serial-chain", "parallel-ancilla")
_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}


def pauli_from_string(s: str) -> Pauli:
    x = z = 0
    for q, ch in enumerate(s):
        if ch not in _BITS:
            raise InvalidArgument(f"bad Pauli letter {ch!r}")
        bx, bz = _BITS[ch]
        x |= bx << q
        z |= bz << q
    return x, z


def pauli_to_string(p: Pauli, n: int) -> str:
    out = []
    for q in range(n):
        out.append("IXZY"[((p[0] >> q) & 1) | (((p[1] >> q) & 1) << 1)])
    return "".join(out)


def single_qubit(q: int, letter: str) -> Pauli:
    bx, bz = _BITS[letter]
    return bx << q, bz << q


def pmul(a: Pauli, b: Pauli) -> Pauli:
    """Product up to phase."""
    return a[0] ^ b[0], a[1] ^ b[1]


def pweight(p: Pauli) -> int:
    return bin(p[0] | p[1]).count("1")


def anticommutes(a: Pauli, b: Pauli) -> bool:
    return bool((bin(a[0] & b[1]).count("1") + bin(a[1] & b[0]).count("1")) & 1)


def _rank(rows: Iterable[int]) -> int:
    basis: list[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
    return len(basis)


@dataclass(frozen=True)
class QuantumCode:
    n: int
    generators: tuple[Stabilizer, ...]
    t: int
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if not self.generators:
            raise InvalidArgument("a code needs at least one generator")
        for g in self.generators:
            if g.n != self.n:
                raise InvalidArgument(f"generator {g} does not act on {self.n} qubits")
        ps = self.paulis
        for i, j in combinations(range(len(ps)), 2):
            if anticommutes(ps[i], ps[j]):
                raise InvalidArgument(f"generators {i} and {j} anticommute")

    @cached_property
    def paulis(self) -> tuple[Pauli, ...]:
        return tuple(pauli_from_string(g.paulis) for g in self.generators)

    @property
    def W(self) -> int:
        return sum(g.w for g in self.generators)

    @property
    def k(self) -> int:
        return self.n - _rank((x << self.n) | z for x, z in self.paulis)

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    def syndrome(self, p: Pauli) -> int:
        return sum(int(anticommutes(g, p)) << i for i, g in enumerate(self.paulis))

    @cached_property
    def decode_table(self) -> dict[int, Pauli]:
        """Syndrome -> first minimal-weight Pauli of weight <= t."""
        table: dict[int, Pauli] = {}
        for k in range(self.t + 1):
            for qubits in combinations(range(self.n), k):
                for letters in product("XYZ", repeat=k):
                    p = (0, 0)
                    for q, ch in zip(qubits, letters):
                        p = pmul(p, single_qubit(q, ch))
                    table.setdefault(self.syndrome(p), p)
        return table

    @cached_property
    def _group(self) -> tuple[np.ndarray, np.ndarray]:
        if self.n > 64:
            raise InvalidArgument("coset weights are limited to 64 qubits")
        xs = np.zeros(1, dtype=np.uint64)
        zs = np.zeros(1, dtype=np.uint64)
        for x, z in self.paulis:
            if _in_group(xs, zs, x, z):
                continue
            xs = np.concatenate([xs, xs ^ np.uint64(x)])
            zs = np.concatenate([zs, zs ^ np.uint64(z)])
        return xs, zs

    def coset_weight(self, p: Pauli) -> int:
        """Minimal weight of ``p`` times any stabilizer."""
        xs, zs = self._group
        sup = (xs ^ np.uint64(p[0])) | (zs ^ np.uint64(p[1]))
        return int(np.bitwise_count(sup).min())

    def in_stabilizer_group(self, p: Pauli) -> bool:
        xs, zs = self._group
        return _in_group(xs, zs, *p)

    def distance(self, d_max: int = 6) -> int | None:
        """Smallest weight of a logical operator, searched up to ``d_max``."""
        for k in range(1, d_max + 1):
            for qubits in combinations(range(self.n), k):
                for letters in product("XYZ", repeat=k):
                    p = (0, 0)
                    for q, ch in zip(qubits, letters):
                        p = pmul(p, single_qubit(q, ch))
                    if self.syndrome(p) == 0 and not self.in_stabilizer_group(p):
                        return k
        return None

    def to_text(self) -> str:
        return "\n".join([f"n={self.n} t={self.t}"] + [g.paulis for g in self.generators]) + "\n"


def _in_group(xs: np.ndarray, zs: np.ndarray, x: int, z: int) -> bool:
    return bool(np.any((xs == np.uint64(x)) & (zs == np.uint64(z))))


def read_code(text: str, name: str = "") -> QuantumCode:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise InvalidArgument("empty code file")
    try:
        header = dict(tok.split("=", 1) for tok in lines[0].split())
        n, t = int(header["n"]), int(header["t"])
    except (KeyError, ValueError) as exc:
        raise InvalidArgument(f"bad code header {lines[0]!r}") from exc
    return QuantumCode(n, tuple(Stabilizer(g) for g in lines[1:]), t, name)


def five_qubit_code() -> QuantumCode:
    gens = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
    return QuantumCode(5, tuple(map(Stabilizer, gens)), 1, "[[5,1,3]]")


def steane_code() -> QuantumCode:
    faces = [(0, 1, 2, 3), (1, 2, 4, 5), (2, 3, 5, 6)]
    return _css_from_faces(7, faces, 1, "[[7,1,3]]")


def shor_code() -> QuantumCode:
    gens = []
    for b in range(3):
        for i in range(2):
            s = ["I"] * 9
            s[3 * b + i] = s[3 * b + i + 1] = "Z"
            gens.append("".join(s))
    for b in range(2):
        s = ["I"] * 9
        for q in range(3 * b, 3 * b + 6):
            s[q] = "X"
        gens.append("".join(s))
    return QuantumCode(9, tuple(map(Stabilizer, gens)), 1, "[[9,1,3]]")


def _css_from_faces(n: int, faces: Sequence[Sequence[int]], t: int, name: str) -> QuantumCode:
    gens = []
    for letter in "XZ":
        for face in faces:
            s = ["I"] * n
            for q in face:
                s[q] = letter
            gens.append("".join(s))
    return QuantumCode(n, tuple(map(Stabilizer, gens)), t, name)


def color_code_19() -> QuantumCode:
    """Distance-5 triangular 6.6.6 color code.

    Triangular-lattice sites in a side-6 triangle are split into three
    sublattices; one sublattice holds the plaquette centres and the other two
    hold the qubits.  Each plaquette acts on its neighbours inside the triangle.
    """
    steps = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]
    sites = [(a, b) for a in range(7) for b in range(7 - a)]
    qubits = [p for p in sites if (p[0] - p[1] + 1) % 3]
    index = {p: i for i, p in enumerate(qubits)}
    faces = []
    for a, b in sites:
        if (a - b + 1) % 3 == 0:
            faces.append(sorted(index[(a + da, b + db)] for da, db in steps if (a + da, b + db) in index))
    return _css_from_faces(len(qubits), faces, 2, "[[19,1,5]]")


KNOWN_CODES = {
    "513": five_qubit_code,
    "steane": steane_code,
    "shor": shor_code,
    "color19": color_code_19,
}


@dataclass(frozen=True)
class Instance:
    """One measurement of one generator."""

    index: int
    round: int
    generator: int
    first_slot: int
    last_slot: int


@dataclass(frozen=True)
class ExtractionPlan:
    code: QuantumCode
    s: int
    reps: int
    circuit: FlagCircuit
    instances: tuple[Instance, ...]
    mode: str = "serial-chain"

    @property
    def W(self) -> int:
        return self.code.W

    @property
    def total_locations(self) -> int:
        return self.s * self.W

    @property
    def order(self) -> tuple[int, ...]:
        return tuple(range(self.code.num_generators))

    @property
    def flags(self) -> int:
        return self.circuit.f

    @property
    def ancillas(self) -> int:
        """Extra measured ancillas: one per syndrome qubit in parallel mode."""
        return len(self.instances) if self.mode == "parallel-ancilla" else 0

    @cached_property
    def slot_instance(self) -> tuple[int, ...]:
        out = []
        for inst in self.instances:
            out.extend([inst.index] * (inst.last_slot - inst.first_slot + 1))
        return tuple(out)

    @cached_property
    def slot_paulis(self) -> tuple[Pauli, ...]:
        return tuple(single_qubit(op.qubit, op.pauli) for op in self.circuit.data_ops)

    @cached_property
    def instance_paulis(self) -> tuple[Pauli, ...]:
        return tuple(self.code.paulis[i.generator] for i in self.instances)

    @cached_property
    def owner_of_column(self) -> tuple[int, ...]:
        """Syndrome qubit (instance) carrying each circuit column."""
        last_cols = [self.circuit.data_ops[i.last_slot].column for i in self.instances]
        out = []
        u = 0
        for col in range(self.circuit.n):
            while u < len(last_cols) - 1 and col > last_cols[u]:
                u += 1
            out.append(u)
        return tuple(out)

    def owner_of_gap(self, g: int) -> int:
        return self.owner_of_column[g] if g < self.circuit.n else len(self.instances) - 1

    def handoff_gap(self, u: int) -> int:
        """Gap just after instance u's last column; its X parity is handed to the next qubit."""
        own = self.owner_of_column
        last = max(j for j in range(self.circuit.n) if own[j] == u)
        return last + 1

    def slots_pauli(self, mask: int) -> Pauli:
        p = (0, 0)
        k = 0
        while mask:
            if mask & 1:
                p = pmul(p, self.slot_paulis[k])
            mask >>= 1
            k += 1
        return p

    def connection_gaps(self) -> list[int]:
        """Gaps where a faulty connection CNOT leaves its X error (instance hand-offs)."""
        return [self.handoff_gap(u) for u in range(len(self.instances) - 1)]


def _chain_check(sW: int, t: int, reps: int):
    H = bch_check(sW, t, wrap=True)
    if reps == 1:
        H = sort_desc(H)
    return H


def connect(
    code: QuantumCode,
    s: int | None = None,
    reps: int | None = None,
    mode: str = "serial-chain",
    flip_order: str = "formula",
) -> ExtractionPlan:
    """Protect all ``s`` rounds of generator measurements with one flag gadget.

    The gadget uses ``reps`` stacked copies of the BCH check matrix on ``sW``
    bits built over the smallest field with 2^m >= sW, giving
    reps * t * ceil(log2(sW)) flags.
    """
    t = code.t
    s = (t + 1) ** 2 if s is None else s
    reps = 2 * t + 1 if reps is None else reps
    if s < 1 or reps < 1:
        raise InvalidArgument("need s >= 1 and reps >= 1")
    if mode not in MODES:
        raise InvalidArgument(f"unknown mode {mode!r}; choose from {MODES}")
    letters = []
    qubits = []
    instances = []
    slot = 0
    for rnd in range(s):
        for gi, g in enumerate(code.generators):
            first = slot
            for q in g.support:
                letters.append(g.paulis[q])
                qubits.append(q)
                slot += 1
            instances.append(Instance(len(instances), rnd, gi, first, slot - 1))
    sW = len(letters)
    stab = Stabilizer("".join(letters))
    H = _chain_check(sW, max(t, 1), reps) if sW >= 2 * max(t, 1) else None
    if H is None:
        raise InvalidArgument(f"{sW} data CNOTs are too few for t={t}")
    try:
        base = unfold(stack(H, reps), stab, flip_order)
    except OrderingViolation:
        base = unfold(stack(sort_desc(H), reps), stab, flip_order)
    ops = tuple(DataOp(op.column, qubits[k], op.pauli) for k, op in enumerate(base.data_ops))
    circuit = FlagCircuit(base.C, ops, stab)
    return ExtractionPlan(code, s, reps, circuit, tuple(instances), mode)


@dataclass(frozen=True)
class Injection:
    """Faults for one connected round: circuit faults, syndrome-bit flips,
    ancilla-bit flips (parallel mode) and a data error present beforehand."""

    faults: FaultSet = FaultSet()
    measurement_flips: frozenset[int] = frozenset()
    ancilla_flips: frozenset[int] = frozenset()
    data_error: Pauli = (0, 0)

    @property
    def weight(self) -> int:
        return self.faults.k + len(self.measurement_flips) + len(self.ancilla_flips) + pweight(self.data_error)


@dataclass(frozen=True)
class LocatedError:
    """A Pauli that appeared on the data while instance ``instance`` was measured."""

    instance: int
    pauli: Pauli


def adjust_syndromes(plan: ExtractionPlan, inferred: Sequence[LocatedError], raw_bits: Sequence[int]) -> list[int]:
    """Flip each later measurement bit whose generator anticommutes with an inferred error."""
    bits = list(raw_bits)
    if len(bits) != len(plan.instances):
        raise InvalidArgument("one bit per generator measurement is required")
    gens = plan.instance_paulis
    for e in inferred:
        for u in range(e.instance + 1, len(bits)):
            if anticommutes(gens[u], e.pauli):
                bits[u] ^= 1
    return bits


def _suffix_errors(plan: ExtractionPlan, start: int) -> list[LocatedError]:
    """Located partial error of an X entering the chain just before ``start``.

    Later whole generators are stabilizers and never change a measurement.
    """
    if start >= plan.total_locations:
        return []
    u = plan.slot_instance[start]
    inst = plan.instances[u]
    if start == inst.first_slot:
        return []
    mask = ((1 << (inst.last_slot + 1)) - 1) & ~((1 << start) - 1)
    return [LocatedError(u, plan.slots_pauli(mask))]


def located_from_correction(plan: ExtractionPlan, x: int) -> list[LocatedError]:
    """Split a slot-mask correction into suffixes and locate each one."""
    out = []
    prev = 0
    for p in range(plan.total_locations):
        bit = (x >> p) & 1
        if bit != prev:
            out.extend(_suffix_errors(plan, p))
        prev = bit
    return out


def shor_decision(history: Sequence[int], t: int) -> tuple[int, bool]:
    """Latest syndrome seen in >= t+1 consecutive rounds, else the last one (flagged)."""
    run = 1
    for r in range(len(history) - 1, -1, -1):
        if r < len(history) - 1 and history[r] == history[r + 1]:
            run += 1
        else:
            run = 1
        if run >= t + 1:
            return history[r], False
    return history[-1], True


@dataclass(frozen=True)
class RoundResult:
    residual: Pauli
    residual_weight: int  # minimised over the stabilizer group
    pattern: int
    flag_correction: int
    raw_bits: tuple[int, ...]
    adjusted_bits: tuple[int, ...]
    decided_syndrome: int
    flagged: bool  # no syndrome repeated t+1 times in a row
    unreachable: bool  # flag pattern missing from the table


def _measure(plan: ExtractionPlan, inj: Injection) -> tuple[int, list[int], Pauli]:
    """Flag pattern, raw syndrome bits and the final data error (before corrections)."""
    c = plan.circuit
    gens = plan.instance_paulis
    nI = len(plan.instances)
    located: list[LocatedError] = []
    data = inj.data_error
    pattern = 0
    for g in inj.faults.syndrome_gaps:
        mask = c.gap_data_masks[g]
        data = pmul(data, plan.slots_pauli(mask))
        # the first slot hit is the lowest set bit of the suffix mask
        start = (mask & -mask).bit_length() - 1 if mask else plan.total_locations
        located.extend(_suffix_errors(plan, start))
    if plan.mode == "serial-chain":
        for g in inj.faults.syndrome_gaps:
            pattern ^= c.fc_columns[g]
    else:
        # each syndrome qubit only reaches the flags on its own columns; the X
        # parity it ends with is read from an ancilla and replayed classically
        ancilla = [0] * nI
        for g in inj.faults.syndrome_gaps:
            u = plan.owner_of_gap(g)
            if u < nI - 1:
                h = plan.handoff_gap(u)
                pattern ^= c.fc_columns[g] ^ c.fc_columns[h]
                ancilla[u] ^= 1
            else:
                pattern ^= c.fc_columns[g]
        for u in inj.ancilla_flips:
            ancilla[u] ^= 1
        for u in range(nI - 1):
            if ancilla[u]:
                pattern ^= c.fc_columns[plan.handoff_gap(u)]
    for i in inj.faults.flag_flips:
        pattern ^= 1 << i
    raw = []
    for u in range(nI):
        before = inj.data_error
        for e in located:
            if e.instance < u:
                before = pmul(before, e.pauli)
        raw.append(int(anticommutes(gens[u], before)) ^ int(u in inj.measurement_flips))
    return pattern, raw, data


def run_round(plan: ExtractionPlan, injected: Injection | FaultSet, table: CorrectionTable | None = None) -> RoundResult:
    """Simulate one connected round and return the residual data error."""
    if isinstance(injected, FaultSet):
        injected = Injection(injected)
    if table is None:
        table = plan_table(plan)
    t = plan.code.t
    pattern, raw, data = _measure(plan, injected)
    x, found = table.lookup(pattern)
    inferred = located_from_correction(plan, x)
    adjusted = adjust_syndromes(plan, inferred, raw)
    ng = plan.code.num_generators
    history = []
    for rnd in range(plan.s):
        bits = adjusted[rnd * ng : (rnd + 1) * ng]
        history.append(sum(b << i for i, b in enumerate(bits)))
    syn, flagged = shor_decision(history, t)
    q = plan.code.decode_table.get(syn)
    if q is None:
        q = (0, 0)
        flagged = True
    residual = pmul(pmul(data, plan.slots_pauli(x)), q)
    return RoundResult(
        residual,
        plan.code.coset_weight(residual),
        pattern,
        x,
        tuple(raw),
        tuple(adjusted),
        syn,
        flagged,
        not found,
    )


@lru_cache(maxsize=8)
def _argmin_table(circuit: FlagCircuit, t: int) -> CorrectionTable:
    return build_table_bruteforce(circuit, t, restricted=False)


def plan_table(plan: ExtractionPlan) -> CorrectionTable:
    return _argmin_table(plan.circuit, plan.code.t)


@dataclass(frozen=True)
class SweepEntry:
    kind: str
    label: str
    injection: Injection
    result: RoundResult


def single_fault_injections(plan: ExtractionPlan) -> list[tuple[str, str, Injection]]:
    """Every single fault: gaps (including connections), flags, syndrome bits, prior data errors."""
    c = plan.circuit
    out = []
    conn = set(plan.connection_gaps())
    for g in range(c.l):
        kind = "connection" if g in conn else "gap"
        out.append((kind, f"gap {g}", Injection(FaultSet.of(gaps=[g]))))
    for i in range(c.f):
        out.append(("flag", f"flag {i}", Injection(FaultSet.of(flags=[i]))))
    for u in range(len(plan.instances)):
        out.append(("measurement", f"syndrome bit {u}", Injection(measurement_flips=frozenset([u]))))
    if plan.mode == "parallel-ancilla":
        for u in range(len(plan.instances) - 1):
            out.append(("ancilla", f"ancilla {u}", Injection(ancilla_flips=frozenset([u]))))
    for q in range(plan.code.n):
        for ch in "XYZ":
            out.append(("data", f"{ch}{q}", Injection(data_error=single_qubit(q, ch))))
    return out


def single_fault_sweep(plan: ExtractionPlan, table: CorrectionTable | None = None) -> list[SweepEntry]:
    table = plan_table(plan) if table is None else table
    return [SweepEntry(k, lab, inj, run_round(plan, inj, table)) for k, lab, inj in single_fault_injections(plan)]


def plan_fault_sets(plan: ExtractionPlan) -> int:
    return fault_count(plan.circuit, plan.code.t)
