from itertools import combinations

import pytest

from flagcodes.errors import InvalidArgument
from flagcodes.faults import FaultSet
from flagcodes.gadget import Stabilizer
from flagcodes.multi import (
    Injection,
    LocatedError,
    QuantumCode,
    adjust_syndromes,
    anticommutes,
    color_code_19,
    connect,
    five_qubit_code,
    pauli_from_string,
    pauli_to_string,
    plan_table,
    pmul,
    pweight,
    read_code,
    run_round,
    shor_code,
    shor_decision,
    single_fault_sweep,
    single_qubit,
    steane_code,
)
from oracles import pauli_commutes, simulate


def test_pauli_helpers():
    p = pauli_from_string("XIZY")
    assert pauli_to_string(p, 4) == "XIZY"
    assert pweight(p) == 3
    assert pmul(p, p) == (0, 0)
    assert pmul(single_qubit(0, "X"), single_qubit(0, "Z")) == single_qubit(0, "Y")
    with pytest.raises(InvalidArgument):
        pauli_from_string("XQ")
    letters = ["I", "X", "Y", "Z"]
    for a in letters:
        for b in letters:
            assert anticommutes(pauli_from_string(a + "X"), pauli_from_string(b + "X")) == (
                not pauli_commutes(a, b)
            )


@pytest.mark.parametrize(
    "build,n,W,gens", [(five_qubit_code, 5, 16, 4), (steane_code, 7, 24, 6), (shor_code, 9, 24, 8)]
)
def test_small_codes(build, n, W, gens):
    code = build()
    assert (code.n, code.W, code.num_generators, code.k) == (n, W, gens, 1)
    for a, b in combinations(code.generators, 2):
        assert pauli_commutes(a.paulis, b.paulis)
    assert code.distance(4) == 3


@pytest.mark.slow
def test_color_code_19():
    code = color_code_19()
    assert (code.n, code.W, code.num_generators, code.k, code.t) == (19, 84, 18, 1, 2)
    assert max(g.w for g in code.generators) == 6
    assert code.distance(5) == 5


def test_anticommuting_generators_rejected():
    with pytest.raises(InvalidArgument):
        QuantumCode(2, (Stabilizer("XI"), Stabilizer("ZI")), 0)


def test_decode_table_and_cosets():
    code = steane_code()
    for q in range(7):
        for ch in "XYZ":
            e = single_qubit(q, ch)
            assert code.decode_table[code.syndrome(e)] == e
    g = code.paulis[0]
    assert code.in_stabilizer_group(g) and code.coset_weight(g) == 0
    assert code.coset_weight(pmul(g, single_qubit(0, "X"))) <= 1


def test_code_text_round_trip():
    code = five_qubit_code()
    again = read_code(code.to_text(), "again")
    assert again.generators == code.generators and again.t == 1
    with pytest.raises(InvalidArgument):
        read_code("t=1\nXX\n")


def test_connect_sizes():
    plan = connect(five_qubit_code(), 4, 3)
    assert plan.total_locations == 64 and plan.flags == 18 and plan.circuit.w == 64
    assert len(plan.instances) == 16 and plan.ancillas == 0
    assert connect(five_qubit_code(), 4, 3, mode="parallel-ancilla").ancillas == 16
    with pytest.raises(InvalidArgument):
        connect(five_qubit_code(), 4, 3, mode="ring")


@pytest.mark.slow
def test_connect_color_code():
    plan = connect(color_code_19())
    assert (plan.s, plan.reps, plan.total_locations, plan.flags) == (9, 5, 756, 100)


def test_single_generator_plan():
    code = QuantumCode(6, (Stabilizer("XXXXXX"),), 1, "rep")
    plan = connect(code, 1, 3)
    assert plan.total_locations == 6 and len(plan.instances) == 1
    assert plan.circuit.f == 3 * 3  # wrap BCH over GF(8)
    assert run_round(plan, Injection()).residual_weight == 0


def test_adjust_syndromes():
    plan = connect(five_qubit_code(), 4, 3)
    raw = [0] * 16
    assert adjust_syndromes(plan, [LocatedError(15, single_qubit(1, "X"))], raw) == raw
    # X on qubit 1 anticommutes with every later generator holding Z there
    got = adjust_syndromes(plan, [LocatedError(0, single_qubit(1, "X"))], raw)
    want = [int(v > 0 and plan.code.generators[v % 4].paulis[1] in "ZY") for v in range(16)]
    assert got == want
    with pytest.raises(InvalidArgument):
        adjust_syndromes(plan, [], [0])


def test_shor_decision():
    assert shor_decision([5, 5, 3, 3], 1) == (3, False)
    assert shor_decision([1, 2, 3, 3, 2], 1) == (3, False)
    assert shor_decision([1, 2, 3], 1) == (3, True)
    assert shor_decision([4, 4, 4, 1], 2) == (4, False)


def _before(plan, v):
    return (1 << plan.instances[v].first_slot) - 1


@pytest.mark.parametrize("mode", ["serial-chain"])
def test_bits_match_slot_replay(mode):
    plan = connect(five_qubit_code(), 4, 3, mode=mode)
    c = plan.circuit
    table = plan_table(plan)
    gens = plan.instance_paulis
    for g in range(c.l):
        pattern, mask = simulate(list(c.C.data), c.n, c.data_row, [g], [])
        r = run_round(plan, FaultSet.of(gaps=[g]))
        assert r.pattern == pattern
        x, _ = table.lookup(pattern)
        raw = tuple(int(anticommutes(gens[v], plan.slots_pauli(mask & _before(plan, v)))) for v in range(16))
        adj = tuple(int(anticommutes(gens[v], plan.slots_pauli((mask ^ x) & _before(plan, v)))) for v in range(16))
        assert r.raw_bits == raw
        assert r.adjusted_bits == adj


def test_late_fault_leaves_early_rounds():
    plan = connect(five_qubit_code(), 4, 3)
    last = plan.instances[12]
    col = plan.circuit.data_ops[last.first_slot + 1].column
    r = run_round(plan, FaultSet.of(gaps=[col]))
    assert r.adjusted_bits[:12] == (0,) * 12 and r.residual_weight <= 1


def test_clean_round_and_data_errors():
    plan = connect(five_qubit_code(), 4, 3)
    assert run_round(plan, Injection()).residual == (0, 0)
    for q in range(5):
        for ch in "XYZ":
            r = run_round(plan, Injection(data_error=single_qubit(q, ch)))
            assert r.residual_weight == 0 and not r.flagged


def test_two_faults_are_reported_not_asserted():
    plan = connect(five_qubit_code(), 4, 3)
    r = run_round(plan, Injection(FaultSet.of(gaps=[100, 300]), measurement_flips=frozenset([2])))
    assert r.residual_weight >= 0  # beyond t the outcome is informative only


@pytest.mark.parametrize("mode", ["serial-chain", "parallel-ancilla"])
def test_single_fault_sweep_steane(mode):
    plan = connect(steane_code(), 3, 3, mode=mode)
    sweep = single_fault_sweep(plan)
    kinds = {e.kind for e in sweep}
    assert {"gap", "connection", "flag", "measurement", "data"} <= kinds
    assert max(e.result.residual_weight for e in sweep) <= 1
