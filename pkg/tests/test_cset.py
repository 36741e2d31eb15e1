import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcqg.cset import (
    CSetDescriptor,
    SetKind,
    brute_force_csets,
    classify_irreducible_csets,
    compare_on_window,
    is_adapted,
    materialize_on_window,
    solve_wc,
)
from pcqg.lattice import LatticeSpec, tau


def kinds(descs):
    return sorted(d.kind.value for d in descs)


def by_kind(descs, kind):
    return [d for d in descs if d.kind is kind]


def test_is_adapted_frozen():
    assert is_adapted(1.0, 0.0, 0.5, +1)
    assert is_adapted(1.0, 0.0, 0.5, -1)
    # boundary: c + tau(2) = -2.5 + 2.5 = 0
    assert is_adapted(1.0, -2.5, 0.5, +1)
    assert not is_adapted(1.0, -2.5, 0.5, +1, strict=True)
    assert not is_adapted(1.0, -3.0, 0.5, +1)


def test_solve_wc_frozen():
    assert solve_wc(-2.0) == pytest.approx(1.0, abs=1e-12)
    assert solve_wc(-2.5) == pytest.approx(0.5, rel=1e-12)
    assert solve_wc(-4.25) == pytest.approx(0.25, rel=1e-12)
    with pytest.raises(ValueError):
        solve_wc(-1.0)


@given(st.floats(min_value=-50.0, max_value=-2.0))
def test_solve_wc_round_trip(c):
    w = solve_wc(c)
    assert 0.0 < w <= 1.0
    assert tau(w) == pytest.approx(-c, rel=1e-12)


def test_classify_deep_discrete():
    # w_c = 0.25 < q = 0.5: only the outer series pair survives.
    descs = classify_irreducible_csets(-4.25, 0.5)
    assert kinds(descs) == ["minus_series", "plus_series"]
    plus = by_kind(descs, SetKind.PLUS_SERIES)[0]
    minus = by_kind(descs, SetKind.MINUS_SERIES)[0]
    assert plus.z == pytest.approx(0.125, rel=1e-12)
    assert minus.z == pytest.approx(8.0, rel=1e-12)


def test_classify_w_equals_q():
    # w_c = q: series pair plus the trivial fixed point, no second pair.
    descs = classify_irreducible_csets(-2.5, 0.5)
    assert kinds(descs) == ["minus_series", "plus_series", "trivial"]
    plus = by_kind(descs, SetKind.PLUS_SERIES)[0]
    minus = by_kind(descs, SetKind.MINUS_SERIES)[0]
    assert plus.z == pytest.approx(0.25, rel=1e-12)
    assert minus.z == pytest.approx(4.0, rel=1e-12)


def test_classify_above_minus_two_symbolic():
    descs = classify_irreducible_csets(0.0, 0.5)
    assert len(descs) == 1
    d = descs[0]
    assert d.kind is SetKind.FULL_ORBIT and d.z is None
    lo, hi, lo_open, hi_open = d.z_range
    assert lo == pytest.approx(0.5) and hi == pytest.approx(2.0)
    assert not lo_open and hi_open


def test_classify_at_minus_two_merges():
    # w_c = 1: cases (ii) and (iii) coincide; emit one series pair.
    descs = classify_irreducible_csets(-2.0, 0.5)
    plus = by_kind(descs, SetKind.PLUS_SERIES)
    minus = by_kind(descs, SetKind.MINUS_SERIES)
    assert len(plus) == 1 and len(minus) == 1
    assert plus[0].z == pytest.approx(0.5, rel=1e-12)
    assert minus[0].z == pytest.approx(2.0, rel=1e-12)
    # complementary interval (q, 1/q) is open but nonempty
    full = by_kind(descs, SetKind.FULL_ORBIT)
    assert len(full) == 1


def test_classify_between_q_and_one():
    # q < w_c < 1: both series pairs and a complementary interval.
    q = 0.5
    w = 0.7
    c = -tau(w)
    descs = classify_irreducible_csets(c, q)
    assert len(by_kind(descs, SetKind.PLUS_SERIES)) == 2
    assert len(by_kind(descs, SetKind.MINUS_SERIES)) == 2
    assert len(by_kind(descs, SetKind.FULL_ORBIT)) == 1
    assert not by_kind(descs, SetKind.TRIVIAL)


def test_classify_restricted_to_lattice():
    # Frozen: c=0, q=0.5, lattice base 1: orbit reps in [q, 1/q) are 1 and 0.5.
    lat = LatticeSpec(q=0.5, base=1.0)
    descs = classify_irreducible_csets(0.0, 0.5, restrict_to=lat)
    assert all(d.kind is SetKind.FULL_ORBIT for d in descs)
    zs = sorted(d.z for d in descs)
    assert zs == pytest.approx([0.5, 1.0])
    assert sorted(d.z_exponent for d in descs) == [0, 1]


def test_classify_restricted_drops_off_lattice():
    # base 0.3 lattice contains neither 1 nor the series bases at c=-2.5.
    lat = LatticeSpec(q=0.5, base=0.3)
    descs = classify_irreducible_csets(-2.5, 0.5, restrict_to=lat)
    assert descs == []


def test_classify_restricted_keeps_series():
    lat = LatticeSpec(q=0.5, base=1.0)
    descs = classify_irreducible_csets(-4.25, 0.5, restrict_to=lat)
    assert kinds(descs) == ["minus_series", "plus_series"]
    assert {d.z_exponent for d in descs} == {3, -3}


def test_brute_force_plus_series_window():
    # anchor on the series base: closure of the anchor is the half line down.
    sets = brute_force_csets(-4.25, 0.5, 10, anchor=0.125)
    keyed = {ws.exponents: ws for ws in sets}
    half = tuple(range(0, 11))
    assert half in keyed
    assert keyed[half].limited_low and not keyed[half].limited_high
    # the companion series lives on the same orbit, three steps up
    other = tuple(range(-10, -2))
    assert other in keyed


def test_brute_force_full_window():
    sets = brute_force_csets(0.0, 0.5, 10, anchor=1.0)
    assert len(sets) == 1
    ws = sets[0]
    assert ws.exponents == tuple(range(-10, 11))
    assert ws.limited_low and ws.limited_high


def test_brute_force_singleton_boundary():
    # both directions blocked at the anchor: closure is the singleton.
    sets = brute_force_csets(-2.5, 0.5, 10, anchor=1.0)
    keyed = {ws.exponents for ws in sets}
    assert (0,) in keyed
    # the same orbit carries both series through q^2 and q^-2
    assert tuple(range(1, 11)) in keyed
    assert tuple(range(-10, 0)) in keyed
    assert len(keyed) == 3


def test_materialize_trivial():
    d = CSetDescriptor(kind=SetKind.TRIVIAL, c=-2.5, q=0.5, z=1.0)
    assert materialize_on_window(d, 0.5, 10, anchor=1.0) == (0,)
    assert materialize_on_window(d, 0.5, 10, anchor=0.7) is None


def test_compare_frozen_cases():
    for c in (0.0, -2.0, -2.5, -4.25, 1.7, -7.3):
        for anchor in (1.0, 0.5, 0.7):
            rep = compare_on_window(c, 0.5, 12, anchor=anchor)
            assert rep["equal"], rep


@settings(max_examples=150, deadline=None)
@given(
    st.floats(min_value=-8.0, max_value=8.0),
    st.sampled_from([0.3, 0.5, 0.8]),
    st.sampled_from([1.0, 0.7]),
    st.integers(0, 3),
)
def test_oracle_agreement_property(c, q, anchor_base, shift):
    anchor = anchor_base * q**shift
    rep = compare_on_window(c, q, 12, anchor=anchor)
    assert rep["equal"], rep


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from([0.3, 0.5, 0.8]),
    st.integers(-8, 8),
    st.sampled_from([1.0, 0.7]),
)
def test_oracle_agreement_boundary_values(q, k, anchor):
    # c values sitting exactly on tau boundaries of the anchor orbit.
    c = -tau(anchor * anchor * q**k)
    rep = compare_on_window(c, q, 12, anchor=anchor)
    assert rep["equal"], rep
    rep2 = compare_on_window(-c, q, 12, anchor=anchor)
    assert rep2["equal"], rep2


def test_returned_sets_are_adapted_and_closed():
    q = 0.5
    for c in (-2.0, -2.5, -4.25, -6.1, 0.3):
        for ws in brute_force_csets(c, q, 12, anchor=1.0):
            pts = [q ** (2 * k) for k in ws.exponents]
            assert all(
                is_adapted(z, c, q, +1) and is_adapted(z, c, q, -1) for z in pts
            )
            kset = set(ws.exponents)
            for k in ws.exponents:
                z = q ** (2 * k)
                if is_adapted(z, c, q, +1, strict=True) and abs(k - 1) <= 12:
                    assert k - 1 in kset or k - 1 < -12
                if is_adapted(z, c, q, -1, strict=True) and abs(k + 1) <= 12:
                    assert k + 1 in kset or k + 1 > 12


def test_distinctness_invariant():
    # materialized descriptors at one c are pairwise disjoint
    q = 0.5
    for c in (-2.5, -4.25, -tau(0.7)):
        descs = classify_irreducible_csets(c, q, restrict_to=LatticeSpec(q=q, base=1.0))
        mats = [
            materialize_on_window(d, q, 12, anchor=1.0)
            for d in descs
        ]
        mats = [m for m in mats if m]
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                assert not (set(mats[i]) & set(mats[j]))


def test_series_labels():
    assert classify_irreducible_csets(0.0, 0.5)[0].series_label() == "principal_orbit"
    descs = classify_irreducible_csets(-tau(0.7), 0.5)
    full = by_kind(descs, SetKind.FULL_ORBIT)[0]
    assert full.series_label() == "complementary_orbit"


def test_solve_wc_stable_at_large_negative_c():
    # the small root of w + 1/w = -c must stay on the lattice even when
    # -c is huge; the naive quadratic formula cancels here
    for q in (0.3, 0.5, 0.8):
        for k in range(2, 16):
            w = solve_wc(-tau(q**-k))
            assert abs(w - q**k) / q**k < 1e-12, (q, k)
