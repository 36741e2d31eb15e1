"""Dynamical quantum SU(2): weight representations and structure checks.

The algebra has four generators arranged in a 2x2 matrix u_{eps,nu}
(alpha, beta, gamma, delta), graded over a two-sided exponent lattice,
with coefficient functions f(lambda, rho) sliding through generators by
lattice shifts.  For -2 < c < 2 the weight representation pi_c realizes
every generator as a weighted shift with all weights of modulus < 1;
pi_c at two different c values is the oracle for every symbolic claim
in this module (rewriting rules, antipode, coproduct compatibility).

Relation families verified here:
  * the six orthogonality lines of the generator matrix (row/column
    sums and crosses),
  * the four star-elimination identities and their uniform right-hand
    form,
  * coefficient-function sliding for each generator,
  * the four extended commutation identities, checked in a normalized
    form (both sides divided by tau(lambda)tau(rho)) so every operand
    stays O(1) on any window; the literal form differs by an invertible
    positive diagonal and is equivalent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .lattice import LatticeSpec, tau, weight_w
from .windowed import (
    RelationResidual,
    Window,
    WindowAxis,
    WindowedOperator,
    identity_op,
    mul_op,
    op_norm_bound,
    relation_residual,
    shift_op,
)
from .words import (
    CoeffFn,
    RuleSet,
    Term,
    dirac_projection,
    letter_displacement,
    reduce_word,
)

GEN_NAMES = ("alpha", "beta", "gamma", "delta")
NAME_TO_EPSNU = {
    "alpha": (-1, -1),
    "beta": (-1, +1),
    "gamma": (+1, -1),
    "delta": (+1, +1),
}
LETTER_TO_NAME = {"a": "alpha", "b": "beta", "g": "gamma", "d": "delta"}


@dataclass(frozen=True)
class DynParams:
    q: float
    x: float = 1.0
    c: float = 0.0

    def __post_init__(self):
        if not 0 < self.q < 1:
            raise ValueError("q must be in (0,1)")
        if self.x <= 0:
            raise ValueError("x must be positive")


def generator_weight(
    eps: int, nu: int, yv: float, zv: float, c: float, q: float
) -> float:
    """Shift weight of u_{eps,nu} at the point (y, z), sign included."""
    num = tau(yv**eps * zv**nu / q) + eps * nu * c
    den = tau(yv**eps) * tau(zv**nu / q)
    theta = -1.0 if (eps, nu) == (-1, 1) else 1.0
    return theta * math.sqrt(num / den)


@dataclass(frozen=True)
class PiCBundle:
    params: DynParams
    window: Window
    ops: dict

    @property
    def q(self) -> float:
        return self.params.q

    def u(self, name: str) -> WindowedOperator:
        return self.ops[name]

    @property
    def alpha(self):
        return self.ops["alpha"]

    @property
    def beta(self):
        return self.ops["beta"]

    @property
    def gamma(self):
        return self.ops["gamma"]

    @property
    def delta(self):
        return self.ops["delta"]

    def mul_fn(self, f: Callable[[float, float], complex]) -> WindowedOperator:
        """Diagonal operator of a function of the (lambda, rho) values."""
        return mul_op(lambda p1, p2: f(p1.value, p2.value), self.window)

    def projection(self, i: int, j: int) -> WindowedOperator:
        """Unit projection onto the basis vector at exponents (i, j)."""
        return mul_op(
            lambda p1, p2: 1.0 if (p1.n, p2.n) == (i, j) else 0.0, self.window
        )

    def margins(self, pad: int = 2):
        return tuple((pad, pad) for _ in self.window.axes)

    def exact_boundaries(self) -> frozenset:
        return frozenset()


def default_window(params: DynParams, half: int = 10) -> Window:
    spec = LatticeSpec(q=params.q, base=params.x)
    ax = WindowAxis(spec, -half, half)
    return Window((ax, ax))


def build_pi_c(params: DynParams, window: Optional[Window] = None) -> PiCBundle:
    if abs(params.c) >= 2:
        raise ValueError("pi_c needs -2 < c < 2; use the product picture beyond")
    if window is None:
        window = default_window(params)
    q, c = params.q, params.c
    ops = {}
    for name, (eps, nu) in NAME_TO_EPSNU.items():
        ops[name] = shift_op(
            lambda p1, p2, e=eps, n=nu: generator_weight(
                e, n, p1.value, p2.value, c, q
            ),
            (-eps, -nu),
            window,
        )
    return PiCBundle(params=params, window=window, ops=ops)


# -- relation battery -------------------------------------------------------


def _sfn(eps: int, q: float):
    return lambda v: math.sqrt(weight_w(v, eps, q))


def verify_dynsu2_relations(b, tol: float = 1e-10) -> list[RelationResidual]:
    """All defining-relation residuals on the bundle's interior.

    Works on anything exposing q, u(name), mul_fn, margins, and
    exact_boundaries; in particular both pi_c bundles and compressed
    coproduct-image bundles.
    """
    q = b.q
    A, B, G, D = (b.u(n) for n in GEN_NAMES)
    As, Bs, Gs, Ds = (op.adjoint() for op in (A, B, G, D))
    ident = identity_op(b.window)
    sp, sm = _sfn(+1, q), _sfn(-1, q)
    margins = b.margins()
    exact = b.exact_boundaries()

    def check(label, terms):
        return relation_residual(
            terms, margins, label=label, tol=tol, exact_boundaries=exact
        )

    def m(f):
        return b.mul_fn(f)

    out = [
        check("ort_row_1", [(1, [A, As]), (1, [B, Bs]), (-1, [ident])]),
        check("ort_row_2", [(1, [G, Gs]), (1, [D, Ds]), (-1, [ident])]),
        check("ort_row_cross", [(1, [A, Gs]), (1, [B, Ds])]),
        check("ort_col_1", [(1, [As, A]), (1, [Gs, G]), (-1, [ident])]),
        check("ort_col_2", [(1, [Bs, B]), (1, [Ds, D]), (-1, [ident])]),
        check("ort_col_cross", [(1, [As, B]), (1, [Gs, D])]),
    ]

    # star identities, display form (functions left for alpha/beta rows)
    out += [
        check(
            "id2_alpha",
            [(1, [As]), (-1, [m(lambda l, r: sp(l) / sp(r)), D])],
        ),
        check(
            "id2_beta",
            [(1, [Bs]), (1, [m(lambda l, r: sp(l) / sm(r)), G])],
        ),
        check(
            "id2_gamma",
            [(1, [Gs]), (1, [B, m(lambda l, r: sm(r) / sp(l))])],
        ),
        check(
            "id2_delta",
            [(1, [Ds]), (-1, [A, m(lambda l, r: sp(r) / sp(l))])],
        ),
    ]

    # the same four in the uniform right-hand form
    out += [
        check(
            "adjoint_alpha",
            [(1, [As]), (-1, [D, m(lambda l, r: sm(r) / sm(l))])],
        ),
        check(
            "adjoint_beta",
            [(1, [Bs]), (1, [G, m(lambda l, r: sp(r) / sm(l))])],
        ),
        check(
            "adjoint_gamma",
            [(1, [Gs]), (1, [B, m(lambda l, r: sm(r) / sp(l))])],
        ),
        check(
            "adjoint_delta",
            [(1, [Ds]), (-1, [A, m(lambda l, r: sp(r) / sp(l))])],
        ),
    ]

    # function sliding: f u = u f(shifted), with a generic test function
    def f0(l, r):
        return tau(l) + 2.0 * tau(q * r) + l * r

    for name, (eps, nu) in NAME_TO_EPSNU.items():
        U = b.u(name)
        shifted = lambda l, r, e=eps, n=nu: f0(q**-e * l, q**-n * r)
        out.append(
            check(
                f"slide_{name}",
                [(1, [m(f0), U]), (-1, [U, m(shifted)])],
            )
        )

    # extended commutation, normalized by tau(lambda) tau(rho)
    kappa = q - 1.0 / q

    def rhs(sign_fn):
        return m(lambda l, r: kappa * sign_fn(l, r) / (tau(l) * tau(r)))

    wp = lambda v: weight_w(v, +1, q)
    wm = lambda v: weight_w(v, -1, q)
    out += [
        check(
            "extcom_alpha",
            [
                (1, [m(lambda l, r: wp(r)), As, A]),
                (-1, [m(lambda l, r: wm(l)), A, As]),
                (-1, [rhs(lambda l, r: l * r - 1.0 / (l * r))]),
            ],
        ),
        check(
            "extcom_beta",
            [
                (1, [m(lambda l, r: wm(r)), Bs, B]),
                (-1, [m(lambda l, r: wm(l)), B, Bs]),
                (-1, [rhs(lambda l, r: l / r - r / l)]),
            ],
        ),
        check(
            "extcom_gamma",
            [
                (1, [m(lambda l, r: wp(r)), Gs, G]),
                (-1, [m(lambda l, r: wp(l)), G, Gs]),
                (-1, [rhs(lambda l, r: r / l - l / r)]),
            ],
        ),
        check(
            "extcom_delta",
            [
                (1, [m(lambda l, r: wm(r)), Ds, D]),
                (-1, [m(lambda l, r: wp(l)), D, Ds]),
                (-1, [rhs(lambda l, r: 1.0 / (l * r) - l * r)]),
            ],
        ),
    ]
    return out


def generator_norm_bounds(b) -> dict:
    return {name: op_norm_bound(b.u(name)) for name in GEN_NAMES}


# -- coproduct compatibility ------------------------------------------------


@dataclass(frozen=True)
class DeltaImageBundle:
    """Coproduct images on the matched-middle compressed space.

    Basis vectors carry three exponents (y, v, z); the image of u_{eps,nu}
    is the sum over the middle signature mu of a three-axis shift whose
    weight is the product of the two leg weights.  Coefficient functions
    act through the outer axes only, matching the coproduct of a
    diagonal function.
    """

    q: float
    c1: float
    c2: float
    window: Window
    ops: dict

    def u(self, name: str) -> WindowedOperator:
        return self.ops[name]

    def mul_fn(self, f) -> WindowedOperator:
        return mul_op(lambda p1, p2, p3: f(p1.value, p3.value), self.window)

    def margins(self, pad: int = 2):
        return tuple((pad, pad) for _ in self.window.axes)

    def exact_boundaries(self) -> frozenset:
        return frozenset()


def build_delta_images(b1: PiCBundle, b2: PiCBundle, half: int = 4) -> DeltaImageBundle:
    if b1.params.q != b2.params.q or b1.params.x != b2.params.x:
        raise ValueError("coproduct legs must share q and x")
    q = b1.params.q
    c1, c2 = b1.params.c, b2.params.c
    spec = LatticeSpec(q=q, base=b1.params.x)
    ax = WindowAxis(spec, -half, half)
    win = Window((ax, ax, ax))
    ops = {}
    for name, (eps, nu) in NAME_TO_EPSNU.items():
        total = None
        for mu in (-1, +1):
            piece = shift_op(
                lambda p1, p2, p3, e=eps, m=mu, n=nu: generator_weight(
                    e, m, p1.value, p2.value, c1, q
                )
                * generator_weight(m, n, p2.value, p3.value, c2, q),
                (-eps, -mu, -nu),
                win,
            )
            total = piece if total is None else total + piece
        ops[name] = total
    return DeltaImageBundle(q=q, c1=c1, c2=c2, window=win, ops=ops)


def coproduct_compat_check(
    b1: PiCBundle, b2: PiCBundle, half: int = 4, tol: float = 1e-10
) -> list[RelationResidual]:
    """The coproduct images satisfy the full relation battery."""
    db = build_delta_images(b1, b2, half=half)
    return verify_dynsu2_relations(db, tol=tol)


def uncompressed_unitarity_gap(
    b1: PiCBundle, b2: PiCBundle, half: int = 2
) -> tuple[float, float]:
    """Row-sum check on the raw two-leg tensor product, without compression.

    Returns (residual against the matching projection, residual against
    the full identity).  The first is small, the second is large: the
    row sum of the coproduct images equals the coproduct of the unit
    (the matched-middle support projection), not the identity, so
    dropping the middle-index restriction is detectably wrong.
    """
    q = b1.params.q
    spec = LatticeSpec(q=q, base=b1.params.x)
    ax = WindowAxis(spec, -half, half)
    leg = Window((ax, ax))
    n = ax.size
    legops1 = build_pi_c(b1.params, leg).ops
    legops2 = build_pi_c(b2.params, leg).ops

    def name_of(e, m):
        for k, v in NAME_TO_EPSNU.items():
            if v == (e, m):
                return k
        raise KeyError

    # matching projection: middle exponents equal
    dim = leg.size * leg.size
    P = np.zeros((dim, dim))
    for i in range(leg.size):
        (_, vi) = leg.exponents_of(i)
        for j in range(leg.size):
            (wj, _) = leg.exponents_of(j)
            if vi == wj:
                k = i * leg.size + j
                P[k, k] = 1.0

    eps = -1
    row = np.zeros((dim, dim), dtype=complex)
    for nu in (-1, +1):
        U = np.zeros((dim, dim), dtype=complex)
        for mu in (-1, +1):
            U += np.kron(
                legops1[name_of(eps, mu)].matrix, legops2[name_of(mu, nu)].matrix
            )
        U = U @ P
        row += U @ U.conj().T
    # compare only away from the leg-window edges (margin 1 per axis)
    keep = []
    for i in range(leg.size):
        yi, vi = leg.exponents_of(i)
        for j in range(leg.size):
            wj, zj = leg.exponents_of(j)
            if all(abs(t) <= half - 1 for t in (yi, vi, wj, zj)):
                keep.append(i * leg.size + j)
    keep = np.array(keep)
    d_match = np.abs(row - P)[np.ix_(keep, keep)].max()
    d_ident = np.abs(row - np.eye(dim))[np.ix_(keep, keep)].max()
    return float(d_match), float(d_ident)


# -- symbolic term evaluation (shared by antipode and rewriter checks) ------


def term_operator(t: Term, b: PiCBundle) -> WindowedOperator:
    out = b.mul_fn(t.coeff)
    for ch in reversed(t.letters):
        base = LETTER_TO_NAME[ch[0]]
        op = b.u(base)
        if ch.endswith("*"):
            op = op.adjoint()
        out = op @ out
    return out


def terms_residual(
    terms: list[tuple[complex, Term]], b: PiCBundle, label: str, tol: float = 1e-10
) -> RelationResidual:
    rt = [(z, [term_operator(t, b)]) for z, t in terms]
    return relation_residual(rt, b.margins(3), label=label, tol=tol)


# -- antipode ---------------------------------------------------------------

S_LETTER = {"a": "a*", "b": "g*", "g": "b*", "d": "d*"}


def star_eliminate(terms: list[tuple[complex, Term]], rules: RuleSet):
    """Replace starred letters via the adjoint identities; no reordering."""
    q = rules.q
    work = [(z, t) for z, t in terms]
    out = []
    while work:
        z, t = work.pop()
        for i, ch in enumerate(t.letters):
            if ch.endswith("*"):
                sign, rep, fn = rules.star_rules[ch]
                tail = t.letters[i + 1 :]
                fn2 = fn
                for c2 in tail:
                    dl, dr = letter_displacement(c2)
                    fn2 = fn2.shifted(dl, dr, q)
                work.append(
                    (z * sign, Term(t.letters[:i] + (rep,) + tail, fn2 * t.coeff))
                )
                break
        else:
            out.append((z, t))
    return out


def s_transform(terms: list[tuple[complex, Term]], q: float):
    """Apply the antipode to a star-free term list.

    Anti-multiplicative on letters (word reversed, each letter sent to
    the starred partner with indices swapped), coefficient functions get
    their arguments swapped and are pushed back to the right end.
    """
    out = []
    for z, t in terms:
        if not t.is_star_free():
            raise ValueError("star-eliminate before applying the antipode")
        new_letters = tuple(S_LETTER[ch] for ch in reversed(t.letters))
        fn = t.coeff.swapped()
        for ch in new_letters:
            dl, dr = letter_displacement(ch)
            fn = fn.shifted(dl, dr, q)
        out.append((z, Term(new_letters, fn)))
    return out


def defining_relations(q: float) -> dict[str, list[tuple[complex, Term]]]:
    """The fourteen defining relations as symbolic term lists (sum = 0).

    Extended-commutation lines appear in the normalized form; coefficient
    functions are already pushed to the right end of each word (the
    adjoint pairs have net displacement zero, so the functions pass
    through unchanged).
    """
    one = CoeffFn.one()
    sp, sm = _sfn(+1, q), _sfn(-1, q)

    def T(letters, fn=None):
        return Term(tuple(letters), fn if fn is not None else one)

    def cf(fn, label):
        return CoeffFn(fn, label)

    wp = lambda v: weight_w(v, +1, q)
    wm = lambda v: weight_w(v, -1, q)
    kappa = q - 1.0 / q

    rel = {
        "ort_row_1": [(1, T(["a", "a*"])), (1, T(["b", "b*"])), (-1, T([]))],
        "ort_row_2": [(1, T(["g", "g*"])), (1, T(["d", "d*"])), (-1, T([]))],
        "ort_row_cross": [(1, T(["a", "g*"])), (1, T(["b", "d*"]))],
        "ort_col_1": [(1, T(["a*", "a"])), (1, T(["g*", "g"])), (-1, T([]))],
        "ort_col_2": [(1, T(["b*", "b"])), (1, T(["d*", "d"])), (-1, T([]))],
        "ort_col_cross": [(1, T(["a*", "b"])), (1, T(["g*", "d"]))],
        "id2_alpha": [
            (1, T(["a*"])),
            (-1, T(["d"], cf(lambda l, r: sm(r) / sm(l), "s-(R)/s-(L)"))),
        ],
        "id2_beta": [
            (1, T(["b*"])),
            (1, T(["g"], cf(lambda l, r: sp(r) / sm(l), "s+(R)/s-(L)"))),
        ],
        "id2_gamma": [
            (1, T(["g*"])),
            (1, T(["b"], cf(lambda l, r: sm(r) / sp(l), "s-(R)/s+(L)"))),
        ],
        "id2_delta": [
            (1, T(["d*"])),
            (-1, T(["a"], cf(lambda l, r: sp(r) / sp(l), "s+(R)/s+(L)"))),
        ],
        "extcom_alpha": [
            (1, T(["a*", "a"], cf(lambda l, r: wp(r), "w+(R)"))),
            (-1, T(["a", "a*"], cf(lambda l, r: wm(l), "w-(L)"))),
            (
                -1,
                T(
                    [],
                    cf(
                        lambda l, r: kappa * (l * r - 1 / (l * r)) / (tau(l) * tau(r)),
                        "rhs_a",
                    ),
                ),
            ),
        ],
        "extcom_beta": [
            (1, T(["b*", "b"], cf(lambda l, r: wm(r), "w-(R)"))),
            (-1, T(["b", "b*"], cf(lambda l, r: wm(l), "w-(L)"))),
            (
                -1,
                T(
                    [],
                    cf(
                        lambda l, r: kappa * (l / r - r / l) / (tau(l) * tau(r)),
                        "rhs_b",
                    ),
                ),
            ),
        ],
        "extcom_gamma": [
            (1, T(["g*", "g"], cf(lambda l, r: wp(r), "w+(R)"))),
            (-1, T(["g", "g*"], cf(lambda l, r: wp(l), "w+(L)"))),
            (
                -1,
                T(
                    [],
                    cf(
                        lambda l, r: kappa * (r / l - l / r) / (tau(l) * tau(r)),
                        "rhs_g",
                    ),
                ),
            ),
        ],
        "extcom_delta": [
            (1, T(["d*", "d"], cf(lambda l, r: wm(r), "w-(R)"))),
            (-1, T(["d", "d*"], cf(lambda l, r: wp(l), "w+(L)"))),
            (
                -1,
                T(
                    [],
                    cf(
                        lambda l, r: kappa * (1 / (l * r) - l * r) / (tau(l) * tau(r)),
                        "rhs_d",
                    ),
                ),
            ),
        ],
    }
    return rel


def antipode_check(
    b: PiCBundle,
    tol: float = 1e-10,
    letter_map: Optional[dict] = None,
    swap_functions: bool = True,
) -> list[RelationResidual]:
    """Antipode consistency in pi_c.

    Every defining relation is star-eliminated, S-transformed (word
    reversal plus the letter swap; coefficient arguments swapped) and the
    resulting identity is evaluated in pi_c.  letter_map overrides the
    generator swap, swap_functions=False skips the argument swap on
    coefficient functions (wrong localization swap); both are
    negative-control knobs.
    """
    q = b.params.q
    rules = RuleSet(q)
    smap = letter_map if letter_map is not None else S_LETTER
    out = []
    for name, terms in defining_relations(q).items():
        flat = star_eliminate(terms, rules)
        transformed = []
        for z, t in flat:
            new_letters = tuple(smap[ch] for ch in reversed(t.letters))
            fn = t.coeff.swapped() if swap_functions else t.coeff
            for ch in new_letters:
                dl, dr = letter_displacement(ch)
                fn = fn.shifted(dl, dr, q)
            transformed.append((z, Term(new_letters, fn)))
        out.append(terms_residual(transformed, b, label=f"S[{name}]", tol=tol))
    return out


def antipode_block_check(b: PiCBundle, tol: float = 1e-12) -> RelationResidual:
    """Blockwise corepresentation condition for the antipode.

    For sample interior blocks: the S-image of the (eps,nu;y,z) block,
    computed through the symbolic machinery, must equal the adjoint of
    the (nu,eps;z,y) block of the generating matrix.
    """
    q, x = b.params.q, b.params.x
    rules = RuleSet(q)
    worst = 0.0
    for name, (eps, nu) in NAME_TO_EPSNU.items():
        letter = {v: k for k, v in LETTER_TO_NAME.items()}[name]
        for (i, j) in ((0, 0), (1, -1), (-2, 3)):
            src = Term((letter,), dirac_projection(i, j, q, x))
            flat = star_eliminate([(1.0, src)], rules)
            transformed = s_transform(flat, q)
            lhs = None
            for z, t in transformed:
                op = z * term_operator(t, b)
                lhs = op if lhs is None else lhs + op
            # swapped-block adjoint: u_{nu,eps} localized at (j, i)
            sw_name = {v: k for k, v in NAME_TO_EPSNU.items()}[(nu, eps)]
            rhs = (b.u(sw_name) @ b.mul_fn(dirac_projection(j, i, q, x))).adjoint()
            worst = max(worst, float(np.abs(lhs.matrix - rhs.matrix).max()))
    return RelationResidual(
        label="antipode_block", residual=worst, margins=b.margins(), tol=tol
    )


def antipode_square_check(b: PiCBundle, tol: float = 1e-12) -> RelationResidual:
    """S^2 restores each generator block up to the modular weight ratio.

    S^2(u at (eps,nu;y,z)) = (tau(y) tau(q^{-nu} z)) / (tau(q^{-eps} y) tau(z))
    times the original block: grading restored, scalar generally not 1.
    """
    q, x = b.params.q, b.params.x
    rules = RuleSet(q)
    worst = 0.0
    for name, (eps, nu) in NAME_TO_EPSNU.items():
        letter = {v: k for k, v in LETTER_TO_NAME.items()}[name]
        for (i, j) in ((0, 0), (2, -1)):
            src = Term((letter,), dirac_projection(i, j, q, x))
            once = s_transform(star_eliminate([(1.0, src)], rules), q)
            twice = s_transform(star_eliminate(once, rules), q)
            lhs = None
            for z, t in twice:
                op = z * term_operator(t, b)
                lhs = op if lhs is None else lhs + op
            yv, zv = x * q**i, x * q**j
            scalar = (tau(yv) * tau(q**-nu * zv)) / (tau(q**-eps * yv) * tau(zv))
            rhs = scalar * (b.u(name) @ b.mul_fn(dirac_projection(i, j, q, x)))
            worst = max(worst, float(np.abs(lhs.matrix - rhs.matrix).max()))
    return RelationResidual(
        label="antipode_square", residual=worst, margins=b.margins(), tol=tol
    )


# -- the x <-> 1/x symmetry -------------------------------------------------


def x_symmetry_check(
    b1: PiCBundle, tol: float = 1e-12, signed: bool = True
) -> list[RelationResidual]:
    """Intertwines pi_c over the x lattice with pi_c over the 1/x lattice.

    The unitary is exponent negation composed with the diagonal sign
    (-1)^floor((m-n)/2); the sign repairs the theta mismatch between
    beta and gamma under the index flip.  signed=False drops the diagonal
    part (negative control: the off-diagonal generators then fail).
    """
    params = b1.params
    half = (b1.window.axes[0].size - 1) // 2
    params2 = DynParams(q=params.q, x=1.0 / params.x, c=params.c)
    b2 = build_pi_c(params2, default_window(params2, half=half))
    n = b1.window.size

    V = np.zeros((n, n))
    for k in range(n):
        ny, nz = b1.window.exponents_of(k)
        V[b2.window.index_of((-ny, -nz)), k] = 1.0
    dvals = np.ones(n)
    if signed:
        for k in range(n):
            a, c2 = b2.window.exponents_of(k)
            dvals[k] = (-1.0) ** ((c2 - a) // 2)
    D = np.diag(dvals)
    T = D @ V
    Tinv = V.T @ D

    out = []
    for name, (eps, nu) in NAME_TO_EPSNU.items():
        mirrored = {v: k for k, v in NAME_TO_EPSNU.items()}[(-eps, -nu)]
        diff = T @ b1.u(name).matrix @ Tinv - b2.u(mirrored).matrix
        out.append(
            RelationResidual(
                label=f"xsym_{name}",
                residual=float(np.abs(diff).max()),
                margins=b1.margins(0),
                tol=tol,
            )
        )
    return out


def lattice_rebase_check(b1: PiCBundle, tol: float = 1e-12) -> RelationResidual:
    """x and qx generate the same lattice: the two builds agree pointwise.

    The (q, qx) window shifted one exponent down enumerates the same
    point values, so each generator matrix must coincide entrywise.
    """
    params = b1.params
    half = (b1.window.axes[0].size - 1) // 2
    spec2 = LatticeSpec(q=params.q, base=params.q * params.x)
    ax2 = WindowAxis(spec2, -half - 1, half - 1)
    win2 = Window((ax2, ax2))
    b2 = build_pi_c(DynParams(params.q, params.q * params.x, params.c), win2)
    worst = 0.0
    for name in GEN_NAMES:
        worst = max(
            worst, float(np.abs(b1.u(name).matrix - b2.u(name).matrix).max())
        )
    return RelationResidual(
        label="rebase", residual=worst, margins=b1.margins(0), tol=tol
    )


# -- word reduction with the pi_c oracle ------------------------------------


def reduce_and_check(
    letters: tuple[str, ...],
    b_pair: tuple[PiCBundle, PiCBundle],
    max_len: int = 8,
) -> dict:
    """Reduce a word to the normal-form basis and verify against pi_c.

    Two bundles at distinct c rule out accidental kernel coincidences.
    Returns the report dict used by the CLI: monomial signatures,
    coefficient labels, oracle residuals, idempotence flag.
    """
    q = b_pair[0].params.q
    rules = RuleSet(q)
    rep = reduce_word(letters, rules, max_len=max_len)
    if rep.budget_hit:
        return {
            "ok": False,
            "error": "step budget exceeded",
            "offending": "".join(rep.offending.letters) if rep.offending else None,
            "steps": rep.steps,
        }
    residuals = []
    for b in b_pair:
        orig = term_operator(Term(tuple(letters), CoeffFn.one()), b)
        red = None
        for t in rep.terms:
            op = term_operator(t, b)
            red = op if red is None else red + op
        margin = max(len(letters), 2)
        r = relation_residual(
            [(1.0, [orig]), (-1.0, [red])],
            b.margins(margin),
            label="reduce",
        )
        residuals.append(r.residual)
    # idempotence: reducing each output term changes nothing
    idempotent = True
    for t in rep.terms:
        again = reduce_word(t.letters, rules, coeff=t.coeff, max_len=max(len(t.letters), 1))
        if len(again.terms) != 1 or again.terms[0].letters != t.letters:
            idempotent = False
    from .words import monomial_signature

    return {
        "ok": True,
        "steps": rep.steps,
        "terms": [
            {
                "monomial": monomial_signature(t),
                "coeff": t.coeff.label,
            }
            for t in rep.terms
        ],
        "oracle_residuals": residuals,
        "idempotent": idempotent,
    }
