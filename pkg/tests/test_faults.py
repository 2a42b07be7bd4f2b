import math
import random

import pytest

from flagcodes.codes import bch_check
from flagcodes.errors import InvalidArgument
from flagcodes.f2core import BitVector
from flagcodes.faults import (
    DataError,
    FaultSet,
    canonical,
    enumerate_faults,
    fault_count,
    propagate,
    residual_weight,
)
from flagcodes.gadget import build_gadget
from oracles import simulate


def test_empty_and_boundary_faults(three_flag):
    p, d = propagate(three_flag, FaultSet())
    assert p.bits.bits == 0 and d.support.bits == 0
    p, d = propagate(three_flag, FaultSet.of(gaps=[0]))
    assert p.bits.bits == 0
    assert d.support.bits == 0b111 and d.canonical().support.bits == 0 and d.residual() == 0
    p, d = propagate(three_flag, FaultSet.of(gaps=[three_flag.l - 1]))
    assert p.bits.bits == 0 and d.weight == 0


def test_three_flag_regions(three_flag):
    # left region: top flag only; middle: both; right: second only
    assert propagate(three_flag, FaultSet.of(gaps=[1]))[0].bits.bits == 0b01
    assert propagate(three_flag, FaultSet.of(gaps=[3]))[0].bits.bits == 0b11
    assert propagate(three_flag, FaultSet.of(gaps=[5]))[0].bits.bits == 0b10
    assert propagate(three_flag, FaultSet.of(flags=[1]))[0].bits.bits == 0b10


def test_out_of_range(three_flag):
    with pytest.raises(InvalidArgument):
        propagate(three_flag, FaultSet.of(gaps=[three_flag.l]))
    with pytest.raises(InvalidArgument):
        propagate(three_flag, FaultSet.of(flags=[2]))
    with pytest.raises(InvalidArgument):
        list(enumerate_faults(three_flag, -1))


@pytest.mark.parametrize("w,t,r", [(7, 1, 3), (9, 2, 3), (13, 2, 2)])
def test_propagate_matches_gate_simulation(w, t, r):
    c = build_gadget(bch_check(w, t), r)
    rng = random.Random(w * 100 + r)
    rows = list(c.C.data)
    for _ in range(300):
        gaps = rng.sample(range(c.l), rng.randint(0, 3))
        flags = rng.sample(range(c.f), rng.randint(0, 2))
        p, d = propagate(c, FaultSet.of(gaps, flags))
        assert (p.bits.bits, d.support.bits) == simulate(rows, c.n, c.data_row, gaps, flags)


def test_counts(w5):
    assert fault_count(w5, 0) == 1
    assert fault_count(w5, 1) == 1 + w5.l + w5.f
    assert fault_count(w5, 2) == 1 + 13 + math.comb(13, 2) == 92
    sets = list(enumerate_faults(w5, 2))
    assert len(sets) == 92 == len(set(sets))
    assert list(enumerate_faults(w5, 0)) == [FaultSet()]


def test_enumeration_order(w5):
    locs = [fs.locations(w5.l) for fs in enumerate_faults(w5, 2)]
    assert locs == sorted(locs, key=lambda x: (len(x), x))
    assert FaultSet.from_locations((3, 12), w5.l) == FaultSet.of(gaps=[3], flags=[1])


def test_first_partition(w5):
    whole = set(enumerate_faults(w5, 2)) - {FaultSet()}
    parts = [set(enumerate_faults(w5, 2, first=i)) for i in range(w5.l + w5.f)]
    assert set().union(*parts) == whole
    assert sum(len(p) for p in parts) == len(whole)


def test_fault_set_counts():
    fs = FaultSet.of(gaps=[1, 4], flags=[0])
    assert (fs.t_s, fs.t_f, fs.k) == (2, 1, 3)
    assert str(fs) == "gaps[1,4] flags[0]"


def test_stabilizer_equivalence():
    assert residual_weight(0b11110, 5) == 1
    assert canonical(0b11110, 5) == 0b00001
    assert canonical(0b0011, 4) == 0b0011  # tie keeps the smaller integer
    assert canonical(0b1100, 4) == 0b0011
    a = DataError(BitVector(4, 0b0111), "XXXX")
    b = DataError(BitVector(4, 0b1000), "XXXX")
    assert a.equivalent(b) and a.residual(b) == 0
    assert str(b) == "X3"
    with pytest.raises(InvalidArgument):
        DataError(BitVector(3, 1), "XX")
