import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcqg.lattice import LatticeSpec, lattice_contains, tau, weight_w


def test_tau_frozen_values():
    assert tau(0.5) == pytest.approx(2.5, abs=1e-15)
    assert tau(1.0) == pytest.approx(2.0, abs=1e-15)
    assert tau(2.0) == pytest.approx(2.5, abs=1e-15)
    assert tau(0.25) == pytest.approx(4.25, abs=1e-15)


def test_tau_rejects_nonpositive():
    with pytest.raises(ValueError):
        tau(0.0)
    with pytest.raises(ValueError):
        tau(-1.0)


def test_weight_w_frozen_value():
    # tau(0.5 * 1) / tau(1) = 2.5 / 2
    assert weight_w(1.0, +1, 0.5) == pytest.approx(1.25, abs=1e-15)
    # w_-(1) at q=0.5: tau(2)/tau(1) = 1.25 as well, by inversion symmetry
    assert weight_w(1.0, -1, 0.5) == pytest.approx(1.25, abs=1e-15)


def test_weight_w_validates_args():
    with pytest.raises(ValueError):
        weight_w(1.0, 0, 0.5)
    with pytest.raises(ValueError):
        weight_w(1.0, 1, 1.5)


positive = st.floats(min_value=1e-6, max_value=1e6)
qs = st.floats(min_value=0.05, max_value=0.95)


@given(positive)
def test_tau_lower_bound_and_symmetry(v):
    t = tau(v)
    assert t >= 2.0 - 1e-12
    assert t == pytest.approx(tau(1.0 / v), rel=1e-12)


@given(positive, positive)
def test_tau_submultiplicative(a, b):
    # tau(ab) + 2 <= tau(a) tau(b)
    assert tau(a * b) + 2.0 <= tau(a) * tau(b) * (1 + 1e-12) + 1e-12


@given(positive, positive)
def test_tau_product_identity(a, b):
    # tau(ab) + tau(a/b) = tau(a) tau(b)
    lhs = tau(a * b) + tau(a / b)
    rhs = tau(a) * tau(b)
    assert lhs == pytest.approx(rhs, rel=1e-9)


@given(qs, positive)
def test_weight_inverse_identities(q, v):
    # w_-(qv) = 1 / w_+(v) and w_eps(v) = w_eps(1/v)... the latter holds for
    # the symmetrized argument: w_eps(1/v) = tau(q^eps/v)/tau(v)
    assert weight_w(q * v, -1, q) == pytest.approx(1.0 / weight_w(v, +1, q), rel=1e-9)


@given(qs, positive)
def test_weight_mirror_identity(q, v):
    # w_eps evaluated at v and at 1/v with opposite sign agree:
    # tau(q^eps v)/tau(v) == tau(q^(-eps)/v)/tau(1/v)
    assert weight_w(v, +1, q) == pytest.approx(weight_w(1.0 / v, -1, q), rel=1e-9)


@settings(max_examples=200)
@given(qs, st.floats(min_value=0.1, max_value=10.0), st.integers(-60, 60), st.sampled_from([1, 2]))
def test_lattice_exponent_round_trip(q, base, n, denom):
    spec = LatticeSpec(q=q, base=base, step_denominator=denom)
    v = spec.value(n)
    assert spec.exponent_of(v) == n
    assert lattice_contains(spec, v) == n


def test_lattice_rejects_off_lattice():
    spec = LatticeSpec(q=0.5, base=1.0)
    assert spec.exponent_of(0.7) is None
    assert 0.7 not in spec
    assert 0.25 in spec


def test_lattice_half_steps():
    spec = LatticeSpec(q=0.5, base=2.0, step_denominator=2)
    v = spec.value(3)  # 2 * 0.5^(3/2)
    assert v == pytest.approx(2.0 * math.sqrt(0.125), rel=1e-14)
    assert spec.exponent_of(v) == 3


def test_lattice_validation():
    with pytest.raises(ValueError):
        LatticeSpec(q=1.2)
    with pytest.raises(ValueError):
        LatticeSpec(q=0.5, base=-1.0)
    with pytest.raises(ValueError):
        LatticeSpec(q=0.5, step_denominator=3)
