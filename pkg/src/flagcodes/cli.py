"""Command-line entry point.

Exit codes: 0 success, 1 fault-tolerance failure, 2 usage or input error,
3 budget exhausted.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from typing import Sequence

from .codes import ParityCheck, bch_check, read_check, sort_desc, verify_distance
from .decode import (
    DEFAULT_BUDGET,
    CorrectionTable,
    build_table_bruteforce,
    build_table_majority,
    decodable,
    verify_ft,
)
from .errors import InvalidArgument, InvalidCircuit, OrderingViolation, ResourceLimit
from .galois import make_field
from .gadget import FLIP_ORDERS, Stabilizer, build_gadget, circuit_from_text, circuit_to_text, double_data
from .multi import KNOWN_CODES, MODES, connect, read_code, single_fault_sweep
from .resources import TIMINGS, ResourceModel, report, reports_to_kv, reports_to_text
from .search import candidate_count, min_reps_grid, search_small

EXIT_OK, EXIT_NOT_FT, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

log = logging.getLogger("flagcodes")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse already exits with 2; keep the message on stderr
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="cap on enumerated fault sets or candidates")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--flip-order", choices=FLIP_ORDERS, default="formula")
    p.add_argument("--format", choices=("text", "kv"), default="text")
    p.add_argument("--field-poly", type=lambda s: int(s, 16), default=None, help="field modulus in hex, e.g. 13")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = _Parser(prog="flagcodes", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bch", parents=[common], help="print a BCH check matrix")
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--sorted", action="store_true", help="columns in descending order")
    p.add_argument("--check-distance", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("synth", parents=[common], help="build an unfolded flag circuit")
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--stabilizer", help="Pauli string; default all X")
    p.add_argument("--double", action="store_true", help="two data CNOTs per region")
    p.add_argument("--out")

    for name, helptext in (("verify", "check a circuit against every fault set"), ("table", "emit a correction table")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--circuit", required=True)
        p.add_argument("--t", type=int, required=True)
        p.add_argument("--decoder", choices=("ball", "brute", "majority"), default="ball")
        p.add_argument("--check", help="matrix file of the (sorted) H, for the majority decoder")
        p.add_argument("--restricted", action="store_true", help="corrections only between paired data CNOTs")
        if name == "verify":
            p.add_argument("--table", help="verify this table instead of building one")
        else:
            p.add_argument("--out")

    p = sub.add_parser("grid", parents=[common], help="FT verdicts over (t, r)")
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--t-max", type=int, required=True)
    p.add_argument("--r-max", type=int, required=True)
    p.add_argument("--r-min", type=int, default=2)
    p.add_argument("--checkpoint")
    p.add_argument("--figure")

    p = sub.add_parser("search", parents=[common], help="search small flag circuits")
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--flags", type=int, required=True)
    p.add_argument("--slots", type=int, required=True)
    p.add_argument("--even-flags", choices=("auto", "yes", "no"), default="auto")
    p.add_argument("--out", help="circuit file; the table goes to OUT.table")

    for name, helptext in (("connect", "connected multi-syndrome plan"), ("resources", "qubit counts")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--code", action="append", choices=sorted(KNOWN_CODES), help="built-in code (repeatable)")
        p.add_argument("--code-file", action="append", help="code file: 'n=<n> t=<t>' then one generator per line")
        p.add_argument("--s", type=int)
        p.add_argument("--reps", type=int)
        if name == "connect":
            p.add_argument("--mode", choices=MODES, default="serial-chain")
            p.add_argument("--sweep", action="store_true", help="inject every single fault")
        else:
            p.add_argument("--tau", type=float, default=math.inf)
            p.add_argument("--mu", type=float, default=0.0)
            p.add_argument("--timing", choices=TIMINGS, default="back-to-back")
            p.add_argument("--min-weight", type=int, default=1, help="only count generators at least this heavy")
            p.add_argument("--figure")
    return ap


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _bch(args) -> ParityCheck:
    field = None
    if args.field_poly is not None:
        m = args.field_poly.bit_length() - 1
        field = make_field(m, args.field_poly)
    return bch_check(args.w, args.t, field)


def _read(path: str) -> str:
    with open(path) as fh:
        return fh.read()


def _kv(pairs: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in pairs.items()) + "\n"


def cmd_bch(args) -> int:
    H = _bch(args)
    if args.sorted:
        H = sort_desc(H)
    if args.check_distance and not verify_distance(H, budget=args.budget):
        print(f"distance {H.d} check failed", file=sys.stderr)
        return EXIT_NOT_FT
    _emit(H.H.to_text(), args.out)
    return EXIT_OK


def cmd_synth(args) -> int:
    H = _bch(args)
    stab = Stabilizer(args.stabilizer) if args.stabilizer else Stabilizer.all_x(args.w)
    c = build_gadget(H, args.reps, stab, args.flip_order)
    if args.double:
        c = double_data(c)
    _emit(circuit_to_text(c), args.out)
    return EXIT_OK


def _table(args, c) -> CorrectionTable | None:
    if args.decoder == "brute":
        return build_table_bruteforce(c, args.t, args.budget, restricted=args.restricted)
    if args.decoder == "majority":
        if not args.check:
            raise InvalidArgument("--decoder majority needs --check")
        H = read_check(_read(args.check), 2 * args.t + 1)
        return build_table_majority(c, H, args.t, args.budget)
    res = decodable(c, args.t, args.budget, restricted=args.restricted)
    if not res.ok:
        bits = "".join(str((res.failing_pattern >> i) & 1) for i in range(c.f))
        print(f"no consistent correction for flag pattern {bits}", file=sys.stderr)
    return res.table


def cmd_verify(args) -> int:
    c = circuit_from_text(_read(args.circuit))
    table = CorrectionTable.from_text(_read(args.table), c) if args.table else _table(args, c)
    if table is None:
        _emit(_kv({"ft": "no", "reason": "empty-intersection"}) if args.format == "kv" else "NOT FT: no decodable table\n", None)
        return EXIT_NOT_FT
    v = verify_ft(c, args.t, table, args.budget)
    info = {"ft": "yes" if v.ok else "no", "t": args.t, "w": c.w, "flags": c.f, "fault_sets": v.checked, "missing": v.missing}
    if v.counterexample:
        cx = v.counterexample
        info.update(fault=str(cx.fault_set).replace(" ", ""), pattern=str(cx.pattern), correction=str(cx.correction), residual=cx.residual)
    if args.format == "kv":
        _emit(_kv(info), None)
    else:
        lines = [("FT" if v.ok else "NOT FT") + f" at t={args.t}: {v.checked} fault sets, w={c.w}, {c.f} flags"]
        if v.counterexample:
            cx = v.counterexample
            lines.append(f"counterexample: {cx.fault_set} pattern {cx.pattern} correction {cx.correction} residual {cx.residual}")
        _emit("\n".join(lines) + "\n", None)
    return EXIT_OK if v.ok else EXIT_NOT_FT


def cmd_table(args) -> int:
    c = circuit_from_text(_read(args.circuit))
    table = _table(args, c)
    if table is None:
        return EXIT_NOT_FT
    _emit(table.to_text(c), args.out)
    return EXIT_OK


def cmd_grid(args) -> int:
    g = min_reps_grid(
        args.w, args.t_max, args.r_max, args.budget, args.r_min, args.jobs, args.checkpoint, args.flip_order
    )
    _emit(g.to_kv() if args.format == "kv" else g.to_text(), None)
    if args.figure:
        from .plotting import grid_figure

        grid_figure(g, args.figure)
    if any(v == "skipped" for v in g.verdicts.values()):
        return EXIT_BUDGET
    return EXIT_OK


def cmd_search(args) -> int:
    even = {"auto": None, "yes": True, "no": False}[args.even_flags]
    hit = search_small(args.w, args.t, args.flags, args.slots, args.seed, args.budget, even, args.jobs)
    if hit is None:
        exhaustive = candidate_count(args.w, args.flags, args.slots) <= args.budget
        print("no passing circuit " + ("exists" if exhaustive else "found within the budget"), file=sys.stderr)
        return EXIT_NOT_FT if exhaustive else EXIT_BUDGET
    if args.out:
        _emit(circuit_to_text(hit.circuit), args.out)
        _emit(hit.table.to_text(hit.circuit), args.out + ".table")
    else:
        _emit(f"# candidate {hit.index}\n" + circuit_to_text(hit.circuit) + hit.table.to_text(hit.circuit), None)
    return EXIT_OK


def _codes(args) -> list:
    codes = [KNOWN_CODES[name]() for name in (args.code or [])]
    for path in args.code_file or []:
        codes.append(read_code(_read(path), name=path))
    if not codes:
        raise InvalidArgument("give at least one --code or --code-file")
    return codes


def cmd_connect(args) -> int:
    status = EXIT_OK
    for code in _codes(args):
        plan = connect(code, args.s, args.reps, args.mode, args.flip_order)
        c = plan.circuit
        info = {
            "code": code.name, "t": code.t, "s": plan.s, "W": plan.W, "sW": plan.total_locations, "reps": plan.reps,
            "flags": plan.flags, "ancillas": plan.ancillas, "cnots": c.n, "locations": c.l, "mode": plan.mode,
        }
        if args.sweep:
            sweep = single_fault_sweep(plan)
            worst = max(e.result.residual_weight for e in sweep if e.kind != "data")
            data_worst = max((e.result.residual_weight for e in sweep if e.kind == "data"), default=0)
            ok = worst <= code.t and data_worst == 0
            info.update(injected=len(sweep), worst_fault_residual=worst, worst_data_residual=data_worst, ft="yes" if ok else "no")
            if not ok:
                status = EXIT_NOT_FT
        if args.format == "kv":
            _emit(_kv(info), None)
        else:
            _emit("\n".join(f"{k:>22}: {v}" for k, v in info.items()) + "\n\n", None)
    return status


def cmd_resources(args) -> int:
    codes = _codes(args)
    model = ResourceModel(args.tau, args.mu)
    reps = [report(c, model, args.s, args.reps, args.timing, args.min_weight) for c in codes]
    _emit(reports_to_kv(reps) if args.format == "kv" else reports_to_text(reps), None)
    if args.figure:
        from .plotting import resources_figure

        resources_figure(reps, args.figure, codes, args.mu, args.timing)
    return EXIT_OK


COMMANDS = {
    "bch": cmd_bch,
    "synth": cmd_synth,
    "verify": cmd_verify,
    "table": cmd_table,
    "grid": cmd_grid,
    "search": cmd_search,
    "connect": cmd_connect,
    "resources": cmd_resources,
}


def dispatch(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ResourceLimit as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidArgument, InvalidCircuit, OrderingViolation, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
