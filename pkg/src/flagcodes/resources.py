"""Qubit counts for flagged connected extraction against Shor, Steane and Knill EC."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .errors import InvalidArgument
from .multi import QuantumCode

TIMINGS = ("back-to-back", "wait-measure")


def ceil_log2(x: int) -> int:
    if x < 1:
        raise InvalidArgument("log of a non-positive count")
    return (x - 1).bit_length()


@dataclass(frozen=True)
class ResourceModel:
    tau: float = math.inf  # reset time, in CNOT units
    mu: float = 0.0  # measurement time, in CNOT units
    cnot_time: float = 1.0

    def __post_init__(self) -> None:
        if self.tau < 0 or self.mu < 0:
            raise InvalidArgument("reset and measurement times must be non-negative")


def flag_count(t: int, s: int, W: int, reps: int) -> int:
    """reps * t * ceil(log2(s W))."""
    if min(t, s, W, reps) < 1:
        raise InvalidArgument("all arguments must be >= 1")
    return reps * t * ceil_log2(s * W)


def steane_knill(n: int, num_syndromes: int) -> tuple[int, int]:
    if n < 1 or num_syndromes < 1:
        raise InvalidArgument("n and the syndrome count must be >= 1")
    steane = n * num_syndromes
    return steane, 2 * steane


def shor_estimate(code: QuantumCode, model: ResourceModel, s: int, timing: str = "back-to-back") -> int:
    """Greedy lower bound on Shor-EC ancillas for ``s`` rounds.

    Generators are processed round-major in declaration order.  Before each
    one, qubits whose measurement and reset have finished return to the stack;
    the generator then takes |g| qubits (fresh ones if the stack runs short),
    which stay busy for |g| + mu + tau.  With the default timing the next
    generator starts |g| later; ``"wait-measure"`` also waits for the
    measurement (start advances by |g| + mu).
    """
    if timing not in TIMINGS:
        raise InvalidArgument(f"unknown timing {timing!r}; choose from {TIMINGS}")
    if s < 1:
        raise InvalidArgument("s must be >= 1")
    now = 0.0
    free: list[int] = []  # stack of qubit ids
    busy: list[tuple[float, int]] = []  # heap of (available time, qubit)
    used = 0
    for _ in range(s):
        for g in code.generators:
            while busy and busy[0][0] <= now:
                free.append(heapq.heappop(busy)[1])
            span = g.w * model.cnot_time
            release = now + span + model.mu + model.tau
            for _ in range(g.w):
                if free:
                    q = free.pop()
                else:
                    q = used
                    used += 1
                heapq.heappush(busy, (release, q))
            now += span + (model.mu if timing == "wait-measure" else 0.0)
    return used


@dataclass(frozen=True)
class ResourceReport:
    code: str
    t: int
    s: int
    W: int
    reps: int
    shor: int
    flag: int  # flag qubits only; the syndrome qubit is counted separately
    steane: int
    knill: int

    @property
    def flag_total(self) -> int:
        return self.flag + 1

    @property
    def winner(self) -> str:
        counts = {"flag": self.flag_total, "shor": self.shor, "steane": self.steane, "knill": self.knill}
        return min(counts, key=counts.get)

    @property
    def flag_advantage(self) -> bool:
        return self.flag_total < self.shor


def protected_subcode(code: QuantumCode, min_weight: int) -> QuantumCode:
    """The generators of weight >= ``min_weight``; lighter ones need no protection."""
    gens = tuple(g for g in code.generators if g.w >= min_weight)
    if not gens:
        raise InvalidArgument(f"{code.name} has no generator of weight >= {min_weight}")
    return QuantumCode(code.n, gens, code.t, code.name)


def report(
    code: QuantumCode,
    model: ResourceModel = ResourceModel(),
    s: int | None = None,
    reps: int | None = None,
    timing: str = "back-to-back",
    min_weight: int = 1,
) -> ResourceReport:
    """Shor and flag counts cover generators of weight >= ``min_weight``;
    Steane and Knill counts always use the whole code."""
    t = code.t
    s = (t + 1) ** 2 if s is None else s
    reps = 2 * t + 1 if reps is None else reps
    steane, knill = steane_knill(code.n, code.num_generators)
    sub = protected_subcode(code, min_weight) if min_weight > 1 else code
    return ResourceReport(
        code.name,
        t,
        s,
        sub.W,
        reps,
        shor_estimate(sub, model, s, timing),
        flag_count(t, s, sub.W, reps),
        steane,
        knill,
    )


_COLUMNS = ("code", "t", "s", "W", "sW", "reps", "shor", "flag", "flag+1", "steane", "knill", "winner")


def _row(r: ResourceReport) -> list[str]:
    return [r.code, str(r.t), str(r.s), str(r.W), str(r.s * r.W), str(r.reps), str(r.shor), str(r.flag),
            str(r.flag_total), str(r.steane), str(r.knill), r.winner]


def reports_to_text(reports: list[ResourceReport]) -> str:
    rows = [list(_COLUMNS)] + [_row(r) for r in reports]
    widths = [max(len(row[i]) for row in rows) for i in range(len(_COLUMNS))]
    return "\n".join("  ".join(cell.rjust(wd) for cell, wd in zip(row, widths)) for row in rows) + "\n"


def reports_to_kv(reports: list[ResourceReport]) -> str:
    lines = []
    for r in reports:
        lines.append(" ".join(f"{k}={v}" for k, v in zip(_COLUMNS, _row(r))))
    return "\n".join(lines) + "\n"
