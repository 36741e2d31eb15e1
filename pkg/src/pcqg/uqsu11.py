"""Twisted su(1,1) algebra: compatible sets, weight representations, Casimir.

A (y,c)-compatible set T is the square root of an irreducible c-set
living on the lattice of y^2.  On l^2(T) the generators act as

    (q - 1/q) X_eps : delta_r -> (tau(q^eps r^2) + c)^(1/2) delta_{q^eps r}

with E = X_+, F = X_- = E^*, K diagonal r.  The gauge is fixed by taking
every E coefficient real nonnegative, which also makes golden values
deterministic.  The square roots are well defined exactly because the
underlying set is a c-set; a negative radicand means corrupted input.

Series representations terminate on one side algebraically (the shift
weight vanishes at the endpoint), so relation checks there need no
interior margin; the opposite side of a truncated window is an
artificial cut and gets margin >= 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .cset import CSetDescriptor, SetKind, classify_irreducible_csets
from .lattice import LatticePoint, LatticeSpec, tau
from .windowed import (
    RelationResidual,
    Window,
    WindowedOperator,
    identity_op,
    mul_op,
    relation_residual,
    shift_op,
    window_1d,
)

MIN_TRUNCATION = 5


@dataclass(frozen=True)
class CompatibleSet:
    """Irreducible c-set on the y^2 lattice, carried to T by square root.

    gamma_exponent is the base-point exponent of T over the half-step
    lattice of y: the point with that exponent is y * q^(n/2) and equals
    sqrt(descriptor.z) exactly on the exponent scale.
    """

    y: float
    c: float
    q: float
    descriptor: CSetDescriptor
    t_preview: tuple[float, ...] = ()

    @property
    def kind(self) -> SetKind:
        return self.descriptor.kind

    @property
    def gamma_exponent(self) -> int:
        # Z exponent over base y^2 doubles to the Gamma exponent scale
        # with the same integer: y^2 q^m has root y q^(m/2).
        return self.descriptor.z_exponent

    def label(self) -> str:
        return self.descriptor.series_label()


def compatible_sets(y: float, c: float, q: float, window: int = 8) -> list[CompatibleSet]:
    """All (y,c)-compatible sets, as square roots of c-sets in the y^2 lattice.

    window bounds the number of T points listed in the preview of each set
    (the sets themselves may be infinite).
    """
    if y <= 0:
        raise ValueError("y must be positive")
    lat = LatticeSpec(q=q, base=y * y)
    descs = classify_irreducible_csets(c, q, restrict_to=lat)
    out = []
    for d in descs:
        r0 = math.sqrt(d.z)
        if d.kind in (SetKind.PLUS_SERIES, SetKind.TRIVIAL):
            pts = tuple(r0 * q**k for k in range(window))
        elif d.kind is SetKind.MINUS_SERIES:
            pts = tuple(r0 * q**-k for k in range(window))
        else:
            half = window // 2
            pts = tuple(r0 * q**k for k in range(-half, window - half))
        if d.kind is SetKind.TRIVIAL:
            pts = (r0,)
        out.append(CompatibleSet(y=y, c=c, q=q, descriptor=d, t_preview=pts))
    return out


@dataclass(frozen=True)
class UqRep:
    """Operators E, F, K on a window of T, plus boundary bookkeeping."""

    y: float
    c: float
    q: float
    kind: SetKind
    window: Window
    E: WindowedOperator
    F: WindowedOperator
    K: WindowedOperator
    Kinv: WindowedOperator
    # exponent of each window point over the half-step lattice of y,
    # as gamma_exponent + 2n; kept for export
    gamma_base_exponent: Optional[int]
    algebraic_low: bool
    algebraic_high: bool
    is_star: bool = True

    def unit(self, n: int) -> WindowedOperator:
        """Rank-one diagonal projection onto the window point with exponent n."""
        return mul_op(lambda p: 1.0 if p.n == n else 0.0, self.window)

    def margins(self, pad: int = 2) -> tuple[tuple[int, int], ...]:
        return (
            (0 if self.algebraic_low else pad, 0 if self.algebraic_high else pad),
        )

    def exact_boundaries(self) -> frozenset:
        s = set()
        if self.algebraic_low:
            s.add((0, "low"))
        if self.algebraic_high:
            s.add((0, "high"))
        return frozenset(s)

    def to_json_dict(self) -> dict:
        ax = self.window.axes[0]
        return {
            "y": self.y,
            "c": self.c,
            "q": self.q,
            "kind": self.kind.value,
            "t_exponents": [
                self.gamma_base_exponent + 2 * n if self.gamma_base_exponent is not None else n
                for n in ax.exponents()
            ],
            "E": self.E.to_json_dict(),
            "F": self.F.to_json_dict(),
            "K": self.K.to_json_dict(),
        }


def _radicand(r: float, c: float, q: float, eps: int, tol: float) -> float:
    v = tau(q**eps * r * r) + c
    if v < -tol:
        raise ValueError(
            f"negative radicand {v} at r={r}, eps={eps}: input is not a c-set trace"
        )
    return max(v, 0.0)


def build_pi_T(cs: CompatibleSet, truncation: int = 10) -> UqRep:
    """Weight representation on a window of T.

    Infinite directions are cut at `truncation` points from the series
    endpoint (or symmetrically for a full orbit); the cut side is flagged
    artificial for margin handling.

    The default truncation is deliberately modest: E carries weights that
    grow like q^{-n} down an infinite set, and the Casimir cancels two
    tau-sized terms against each other, so the absolute float error of a
    relation residual scales with the largest weight in the window.  Ten
    points at q = 0.5 keep that scale near 1e5, leaving absolute residuals
    below 1e-10.  Deeper windows stay correct but need a tolerance scaled
    by relation_conditioning().
    """
    if truncation < MIN_TRUNCATION:
        raise ValueError(f"truncation must be at least {MIN_TRUNCATION}")
    q, c = cs.q, cs.c
    d = cs.descriptor
    r0 = math.sqrt(d.z)
    spec = LatticeSpec(q=q, base=r0)

    if d.kind is SetKind.TRIVIAL:
        win = window_1d(spec, 0, 0)
        algebraic = (True, True)
    elif d.kind is SetKind.PLUS_SERIES:
        # values descend from the top point r0 as the exponent grows
        win = window_1d(spec, 0, truncation - 1)
        algebraic = (True, False)
    elif d.kind is SetKind.MINUS_SERIES:
        # values ascend from the bottom point r0 as the exponent falls
        win = window_1d(spec, -(truncation - 1), 0)
        algebraic = (False, True)
    else:
        half = truncation // 2
        win = window_1d(spec, -half, half)
        algebraic = (False, False)

    # boundary-scaled tolerance, matching the c-set adaptedness test
    tol = 1e-10 * max(1.0, abs(c))
    scale = 1.0 / abs(q - 1.0 / q)

    def e_weight(p: LatticePoint) -> float:
        return math.sqrt(_radicand(p.value, c, q, +1, tol)) * scale

    E = shift_op(e_weight, (+1,), win)
    F = E.adjoint()
    K = mul_op(lambda p: p.value, win)
    Kinv = mul_op(lambda p: 1.0 / p.value, win)
    return UqRep(
        y=cs.y,
        c=c,
        q=q,
        kind=d.kind,
        window=win,
        E=E,
        F=F,
        K=K,
        Kinv=Kinv,
        gamma_base_exponent=d.z_exponent,
        algebraic_low=algebraic[0],
        algebraic_high=algebraic[1],
    )


def casimir_op(rep: UqRep) -> WindowedOperator:
    """(1/q - q)^2 FE - q K^2 - (1/q) K^-2; scalar c on the interior."""
    q = rep.q
    s = (1.0 / q - q) ** 2
    return (
        s * (rep.F @ rep.E)
        - q * (rep.K @ rep.K)
        - (1.0 / q) * (rep.Kinv @ rep.Kinv)
    )


def relation_conditioning(rep: UqRep) -> float:
    """Largest magnitude appearing among the relation operands.

    Float error of the relation residuals is bounded by a small multiple
    of machine epsilon times this scale; windows with unbounded weights
    (deep series truncations, small q) should test against a tolerance
    proportional to it.
    """
    mags = [
        np.max(np.abs((rep.F @ rep.E).matrix)),
        np.max(np.abs((rep.K @ rep.K).matrix)),
        np.max(np.abs((rep.Kinv @ rep.Kinv).matrix)),
        np.max(np.abs((rep.K @ rep.E).matrix)),
    ]
    return float(max(1.0, *mags))


def verify_uqsu11_relations(rep: UqRep, tol: float = 1e-10) -> list[RelationResidual]:
    q = rep.q
    win = rep.window
    ident = identity_op(win)
    margins = rep.margins()
    exact = rep.exact_boundaries()

    def check(label, terms):
        return relation_residual(
            terms, margins, label=label, tol=tol, exact_boundaries=exact
        )

    out = [
        check("k_invertible", [(1.0, [rep.K, rep.Kinv]), (-1.0, [ident])]),
        check("k_selfadjoint", [(1.0, [rep.K]), (-1.0, [rep.K.adjoint()])]),
        check("ef_adjoint", [(1.0, [rep.F]), (-1.0, [rep.E.adjoint()])]),
        check("ke_commutation", [(1.0, [rep.K, rep.E]), (-q, [rep.E, rep.K])]),
        check(
            "ef_commutator",
            [
                (1.0, [rep.F, rep.E]),
                (-1.0, [rep.E, rep.F]),
                (-1.0 / (q - 1.0 / q), [rep.K, rep.K]),
                (1.0 / (q - 1.0 / q), [rep.Kinv, rep.Kinv]),
            ],
        ),
    ]

    # graded unit relations: E maps the r weight space into the qr one,
    # so P_{next} E P_n = E P_n for every window point n
    ax = win.axes[0]
    worst = 0.0
    for n in ax.exponents():
        p_n = rep.unit(n)
        terms = [(1.0, [rep.E, p_n])]
        if n + 1 <= ax.n_max:
            terms.append((-1.0, [rep.unit(n + 1), rep.E, p_n]))
        r = relation_residual(
            terms,
            ((0, 0),),
            label="unit_grading",
            tol=tol,
            exact_boundaries=frozenset({(0, "low"), (0, "high")}),
        )
        # the top cut column is a truncation artifact unless algebraic
        if n == ax.n_max and not rep.algebraic_high:
            continue
        worst = max(worst, r.residual)
    out.append(
        RelationResidual(
            label="unit_grading", residual=worst, margins=((0, 0),), tol=tol
        )
    )
    return out


def build_verma(y: float, q: float, n_max: int) -> UqRep:
    """Lowest-weight model on e_0..e_{n_max}; not star-compatible.

    E steps up with coefficient 1; F carries the full two-factor weight;
    K is diagonal y q^n.  F annihilates e_0, so the low end is algebraic.
    """
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    if y <= 0:
        raise ValueError("y must be positive")
    spec = LatticeSpec(q=q, base=y)
    win = window_1d(spec, 0, n_max)

    def f_weight(p: LatticePoint) -> float:
        n = p.n
        if n == 0:
            return 0.0
        s = (q - 1.0 / q) ** -2
        return s * (q**n - q**-n) * (q ** (n - 1) * y * y - q ** (1 - n) / (y * y))

    E = shift_op(lambda p: 1.0, (+1,), win)
    F = shift_op(f_weight, (-1,), win)
    K = mul_op(lambda p: p.value, win)
    Kinv = mul_op(lambda p: 1.0 / p.value, win)
    # Casimir scalar of the lowest-weight module with K e_0 = y
    c = -tau(y * y / q)
    return UqRep(
        y=y,
        c=c,
        q=q,
        kind=SetKind.FULL_ORBIT,
        window=win,
        E=E,
        F=F,
        K=K,
        Kinv=Kinv,
        gamma_base_exponent=None,
        algebraic_low=True,
        algebraic_high=False,
        is_star=False,
    )
