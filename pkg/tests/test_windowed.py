import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcqg.lattice import LatticeSpec, tau
from pcqg.windowed import (
    Window,
    WindowAxis,
    identity_op,
    mul_op,
    op_norm_bound,
    relation_residual,
    required_margins,
    shift_op,
    window_1d,
    zero_op,
)

SPEC = LatticeSpec(q=0.5, base=1.0)


def w1(n_min=-20, n_max=20):
    return window_1d(SPEC, n_min, n_max)


def w2(n=10):
    ax = WindowAxis(SPEC, -n, n)
    return Window((ax, ax))


def test_window_ordering():
    w = w2(1)
    assert w.size == 9
    assert w.exponents_of(0) == (-1, -1)
    assert w.exponents_of(8) == (1, 1)
    assert w.index_of((0, 1)) == 5
    for i in range(w.size):
        assert w.index_of(w.exponents_of(i)) == i


def test_window_size_guard():
    with pytest.raises(ValueError):
        window_1d(SPEC, 0, 5000)


def test_mul_op_unit_and_dirac():
    w = w1(-1, 1)
    ident = mul_op(lambda p: 1.0, w)
    assert np.allclose(ident.matrix, np.eye(3))
    dirac = mul_op(lambda p: 1.0 if p.n == 0 else 0.0, w)
    assert np.allclose(np.diag(dirac.matrix), [0, 1, 0])
    assert dirac.shift_degree == (0,)


def test_mul_op_tau_frozen():
    # points at exponents -1,0,1 are 2, 1, 0.5; tau swaps ends equally
    w = w1(-1, 1)
    op = mul_op(lambda p: tau(p.value), w)
    assert np.allclose(np.diag(op.matrix), [2.5, 2.0, 2.5])


def test_shift_op_truncation():
    w = w1(0, 2)
    s = shift_op(lambda p: 1.0, (+1,), w)
    # column of the top exponent leaves the window
    expected = np.zeros((3, 3))
    expected[1, 0] = 1.0
    expected[2, 1] = 1.0
    assert np.allclose(s.matrix, expected)
    assert s.displacement == (1,)


def test_shift_inverse_on_interior():
    w = w1(-5, 5)
    up = shift_op(lambda p: 1.0, (+1,), w)
    dn = shift_op(lambda p: 1.0, (-1,), w)
    ident = identity_op(w)
    res = relation_residual(
        [(1.0, [up, dn]), (-1.0, [ident])], ((1, 0),), label="updown"
    )
    assert res.residual == 0.0
    # the excursion of up.dn is one step down, none up
    assert required_margins([(1.0, [up, dn])], w) == ((1, 0),)


def test_margin_rejection():
    w = w1(-5, 5)
    dn = shift_op(lambda p: 1.0, (-1,), w)
    up = shift_op(lambda p: 1.0, (+1,), w)
    with pytest.raises(ValueError, match="truncation artifacts"):
        relation_residual([(1.0, [up, dn])], 0, label="too-small")


def test_exact_boundary_override():
    # weight vanishing at the window edge: margin 0 is legitimate there
    w = w1(0, 6)
    down = shift_op(lambda p: 0.0 if p.n == 0 else 1.0, (-1,), w)
    up = down.adjoint()
    # down then up is the identity except at the annihilated bottom point
    proj = mul_op(lambda p: 0.0 if p.n == 0 else 1.0, w)
    res = relation_residual(
        [(1.0, [up, down]), (-1.0, [proj])],
        ((0, 1),),
        label="ladder",
        exact_boundaries=frozenset({(0, "low")}),
    )
    assert res.residual < 1e-14


def test_adjoint_involution_and_antihom():
    w = w1(-4, 4)
    a = shift_op(lambda p: tau(p.value) ** 0.5, (+1,), w)
    b = mul_op(lambda p: 1j * p.value, w)
    assert np.allclose(a.adjoint().adjoint().matrix, a.matrix)
    assert np.allclose((a @ b).adjoint().matrix, (b.adjoint() @ a.adjoint()).matrix)


def test_residual_detects_fault():
    w = w2(5)
    up = shift_op(lambda p1, p2: 0.5, (+1, 0), w)
    dn = up.adjoint()
    ident = identity_op(w)
    good = relation_residual(
        [(4.0, [up, dn]), (-1.0, [ident])], 1, label="normalized"
    )
    assert good.residual < 1e-14
    bad_matrix = up.matrix.copy()
    mid = w.index_of((0, 0))
    tgt = w.index_of((1, 0))
    bad_matrix[tgt, mid] += 1e-3
    bad = type(up)(w, bad_matrix, up.shift_degree, up.displacement)
    res = relation_residual([(4.0, [bad, bad.adjoint()]), (-1.0, [ident])], 1)
    assert res.residual >= 1e-3


def test_interior_exactness_window_doubling():
    def build(n):
        w = w1(-n, n)
        up = shift_op(lambda p: 1.0 / tau(p.value), (+1,), w)
        dn = up.adjoint()
        ident = identity_op(w)
        comm = relation_residual(
            [(1.0, [up, dn]), (-1.0, [dn, up])], 1, label="comm"
        )
        return comm.residual

    r_small, r_big = build(8), build(16)
    assert abs(r_small - r_big) < 1e-12


def test_op_norm_bound():
    w = w1(-3, 3)
    assert op_norm_bound(identity_op(w)) == pytest.approx(1.0)
    assert op_norm_bound(2.0 * identity_op(w)) == pytest.approx(2.0)
    assert op_norm_bound(zero_op(w)) == 0.0


def test_json_export_shape():
    w = w1(0, 1)
    s = shift_op(lambda p: 2.0, (+1,), w)
    d = s.to_json_dict()
    assert d["entries"] == [[1, 0, 2.0, 0.0]]
    ax = d["window"]["axes"][0]
    assert ax["q"] == 0.5 and ax["n_min"] == 0 and ax["n_max"] == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(5, 9))
def test_mixed_displacement_margins(d1, d2, n):
    # sum of two shifts with different displacements loses exactness;
    # required margin falls back to the shift-degree bound
    w = w1(-n, n)
    a = shift_op(lambda p: 1.0, (d1,), w)
    b = shift_op(lambda p: 1.0, (d2,), w)
    s = a + b
    if d1 == d2:
        assert s.displacement == (d1,)
    else:
        assert s.displacement == (None,)
        lo, hi = required_margins([(1.0, [s])], w)[0]
        assert lo == max(abs(d1), abs(d2)) and hi == lo
