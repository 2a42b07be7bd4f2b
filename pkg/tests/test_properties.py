from itertools import combinations, product

import pytest
from hypothesis import given, strategies as st

from flagcodes.codes import bch_check, sort_desc
from flagcodes.f2core import BitVector, suffix_xor, xor
from flagcodes.faults import FaultSet, canonical, enumerate_faults, propagate, residual_weight
from flagcodes.gadget import build_gadget, stack
from flagcodes.galois import gf_add, gf_inv, gf_mul, make_field
from flagcodes.multi import anticommutes, pmul


@st.composite
def vectors(draw, count=1):
    n = draw(st.integers(0, 80))
    return [BitVector(n, draw(st.integers(0, (1 << n) - 1))) for _ in range(count)]


@given(vectors(count=3))
def test_triangle_inequality(vs):
    a, b, c = vs
    assert xor(a, c).weight <= xor(a, b).weight + xor(b, c).weight


@given(vectors())
def test_suffix_xor_inverse(vs):
    (v,) = vs
    s = suffix_xor(v).bits
    assert s ^ (s >> 1) == v.bits
    if v.length:
        assert (s & 1) == v.weight % 2


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_field_axioms_exhaustive(m):
    F = make_field(m)
    E = F.elements()
    for a, b in product(E, repeat=2):
        assert gf_mul(a, b, F) == gf_mul(b, a, F)
        assert gf_add(a, b, F) == gf_add(b, a, F)
    for a, b, c in product(E, repeat=3):
        assert gf_mul(gf_mul(a, b, F), c, F) == gf_mul(a, gf_mul(b, c, F), F)
        assert gf_mul(a, gf_add(b, c, F), F) == gf_add(gf_mul(a, b, F), gf_mul(a, c, F), F)
        assert gf_add(gf_add(a, b, F), c, F) == gf_add(a, gf_add(b, c, F), F)
    for a in E:
        assert gf_add(a, F.zero, F) == a and gf_add(a, a, F) == F.zero
        assert gf_mul(a, F.one, F) == a
        if not a.is_zero():
            assert gf_mul(a, gf_inv(a, F), F) == F.one


@pytest.mark.parametrize("w,t", [(w, t) for w in (6, 9, 13, 15) for t in (1, 2, 3) if 2 * t <= w])
def test_stacked_column_weight_bound(w, t):
    F = stack(bch_check(w, t), 2 * t + 1).F
    cols = F.column_ints()
    for k in range(1, 2 * t + 1):
        for sub in combinations(cols, k):
            acc = 0
            for c in sub:
                acc ^= c
            assert bin(acc).count("1") >= 2 * t + 1


def _close_pairs(w, t):
    H = sort_desc(bch_check(w, t))
    h, r = H.rows, 2 * t + 1
    c = build_gadget(H, r)
    hcols = set(H.columns) | {0}

    def sub(g, k):
        return (c.fc_columns[g] >> (k * h)) & ((1 << h) - 1)

    groups: dict[int, list[FaultSet]] = {}
    for fs in enumerate_faults(c, t):
        groups.setdefault(propagate(c, fs)[0].bits.bits, []).append(fs)
    for members in groups.values():
        for a, b in combinations(members, 2):
            gaps = a.syndrome_gaps | b.syndrome_gaps
            flags = a.flag_flips | b.flag_flips
            blocks = [
                k
                for k in range(r)
                if all(sub(g, k) in hcols for g in gaps) and not any(k * h <= i < (k + 1) * h for i in flags)
            ]
            assert blocks, (a, b)
            for k in blocks:
                by_column: dict[int, list[int]] = {}
                for g in sorted(a.syndrome_gaps ^ b.syndrome_gaps):
                    if sub(g, k):
                        by_column.setdefault(sub(g, k), []).append(g)
                for gs in by_column.values():
                    assert len(gs) % 2 == 0
                    for x, y in zip(gs[::2], gs[1::2]):
                        assert bin(c.gap_data_masks[x] ^ c.gap_data_masks[y]).count("1") <= 1


@pytest.mark.parametrize("w,t", [(w, t) for w in range(2, 9) for t in (1, 2) if 2 * t <= w])
def test_close_pairs_lemma(w, t):
    _close_pairs(w, t)


@given(st.integers(1, 40), st.data())
def test_canonical_properties(w, data):
    x = data.draw(st.integers(0, (1 << w) - 1))
    full = (1 << w) - 1
    y = canonical(x, w)
    assert y in (x, x ^ full)
    assert canonical(y, w) == y == canonical(x ^ full, w)
    assert bin(y).count("1") == residual_weight(x, w) <= w // 2


_gadget = build_gadget(bch_check(9, 2), 3)


@given(st.sets(st.integers(0, _gadget.l - 1), max_size=4), st.sets(st.integers(0, _gadget.l - 1), max_size=4))
def test_propagation_is_linear(a, b):
    pa, da = propagate(_gadget, FaultSet.of(gaps=a))
    pb, db = propagate(_gadget, FaultSet.of(gaps=b))
    pab, dab = propagate(_gadget, FaultSet.of(gaps=a ^ b))
    assert pab.bits.bits == pa.bits.bits ^ pb.bits.bits
    assert dab.support.bits == da.support.bits ^ db.support.bits


paulis = st.tuples(st.integers(0, 63), st.integers(0, 63))


@given(paulis, paulis, paulis)
def test_pauli_group(a, b, c):
    assert pmul(pmul(a, b), c) == pmul(a, pmul(b, c))
    assert anticommutes(a, b) == anticommutes(b, a)
    assert anticommutes(a, pmul(b, c)) == (anticommutes(a, b) != anticommutes(a, c))
