import math

import pytest

from flagcodes.errors import InvalidArgument
from flagcodes.gadget import Stabilizer
from flagcodes.multi import QuantumCode, five_qubit_code, shor_code, steane_code
from flagcodes.resources import (
    ResourceModel,
    ceil_log2,
    flag_count,
    protected_subcode,
    report,
    reports_to_kv,
    reports_to_text,
    shor_estimate,
    steane_knill,
)


def test_ceil_log2():
    assert [ceil_log2(x) for x in (1, 2, 3, 4, 5, 64, 65, 756)] == [0, 1, 2, 2, 3, 6, 7, 10]
    with pytest.raises(InvalidArgument):
        ceil_log2(0)


def test_flag_count_single_stabilizer():
    # s=1 and 2t+1 repetitions: (2t^2 + t) ceil(log2 w)
    for t in (1, 2, 3):
        for w in (7, 15, 16, 31):
            assert flag_count(t, 1, w, 2 * t + 1) == (2 * t * t + t) * ceil_log2(w)
    with pytest.raises(InvalidArgument):
        flag_count(0, 1, 5, 3)


def test_steane_knill_small():
    assert steane_knill(1, 1) == (1, 2)
    with pytest.raises(InvalidArgument):
        steane_knill(0, 3)


def test_shor_estimate_limits():
    code = five_qubit_code()
    assert shor_estimate(code, ResourceModel(), 4) == 64
    assert shor_estimate(code, ResourceModel(0, 0), 4) == 4
    mixed = QuantumCode(6, (Stabilizer("XXIIII"), Stabilizer("IIXXXX")), 0)
    assert shor_estimate(mixed, ResourceModel(0, 0), 3) == 4
    with pytest.raises(InvalidArgument):
        shor_estimate(code, ResourceModel(), 4, timing="eager")
    with pytest.raises(InvalidArgument):
        ResourceModel(-1, 0)


def test_timing_models_differ():
    code = shor_code()
    m = ResourceModel(38.5, 12.3)
    assert shor_estimate(code, m, 4, "wait-measure") <= shor_estimate(code, m, 4)


def test_protected_subcode():
    sub = protected_subcode(shor_code(), 3)
    assert sub.num_generators == 2 and sub.W == 12
    with pytest.raises(InvalidArgument):
        protected_subcode(steane_code(), 5)


def test_report_and_text():
    r = report(five_qubit_code(), ResourceModel(), 4, 3)
    assert (r.shor, r.flag, r.flag_total, r.steane, r.knill) == (64, 18, 19, 20, 40)
    assert r.winner == "flag" and r.flag_advantage
    text = reports_to_text([r])
    assert text.splitlines()[0].split()[:3] == ["code", "t", "s"]
    assert "winner=flag" in reports_to_kv([r])
    d = report(five_qubit_code())
    assert (d.s, d.reps) == (4, 3)
    assert math.isinf(ResourceModel().tau)
