"""Bigraded representations of finite-dimensional instances.

A representation lives on a finite bigraded Hilbert space: each basis slot
carries an object pair (k, l), and the operator X = sum_i e_i (x) coeffs[i]
is stored through its algebra-coefficient slices.  Checks, the trivial
representation, the regular representation of a groupoid function algebra,
and the middle-matched tensor product are all plain dense linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fdpcqg import CheckResult, FiniteGroupoid, FinitePQG

__all__ = [
    "BigradedRep",
    "trivial_rep",
    "regular_rep",
    "tensor_reps",
    "verify_rep",
]


@dataclass(frozen=True)
class BigradedRep:
    """X = sum_i e_i (x) coeffs[i] on a space with one (k, l) grade per slot."""

    G: FinitePQG
    blocks: tuple
    coeffs: np.ndarray

    def __post_init__(self):
        d = self.G.dim
        N = len(self.blocks)
        if self.coeffs.shape != (d, N, N):
            raise ValueError("coeffs must be (algebra dim, space dim, space dim)")
        n = self.G.n_objects
        for k, l in self.blocks:
            if not (0 <= k < n and 0 <= l < n):
                raise ValueError("block grade out of range")

    @property
    def space_dim(self) -> int:
        return len(self.blocks)

    def block_projection(self, k: int, l: int) -> np.ndarray:
        return np.diag([1.0 if b == (k, l) else 0.0 for b in self.blocks])

    def row_projection(self, k: int) -> np.ndarray:
        # lambda^H_k
        return np.diag([1.0 if b[0] == k else 0.0 for b in self.blocks])

    def column_projection(self, l: int) -> np.ndarray:
        # rho^H_l
        return np.diag([1.0 if b[1] == l else 0.0 for b in self.blocks])

    def block_dims(self) -> dict:
        out = {}
        for b in self.blocks:
            out[b] = out.get(b, 0) + 1
        return out


def trivial_rep(G: FinitePQG) -> BigradedRep:
    """One slot per object with diagonal grade; slices are the unit projections."""
    blocks = tuple((k, k) for k in range(G.n_objects))
    coeffs = np.transpose(G.units, (2, 0, 1)).copy()
    return BigradedRep(G=G, blocks=blocks, coeffs=coeffs)


def regular_rep(G: FinitePQG, gpd: FiniteGroupoid) -> BigradedRep:
    """Arrows acting on arrows by left translation, for a function algebra.

    Slot h sits in the diagonal grade of src(h); the basis arrow g maps
    delta_h to delta_{gh} when tgt(g) = src(h).  Unitary, and the coefficient
    slices are permutation blocks.
    """
    if G.basis != gpd.arrows:
        raise ValueError("instance basis does not enumerate the groupoid arrows")
    obj = {o: i for i, o in enumerate(gpd.objects)}
    slot = {h: i for i, h in enumerate(gpd.arrows)}
    N = len(gpd.arrows)
    blocks = tuple((obj[gpd.src[h]], obj[gpd.src[h]]) for h in gpd.arrows)
    coeffs = np.zeros((G.dim, N, N))
    for i, g in enumerate(gpd.arrows):
        for h in gpd.arrows:
            if gpd.tgt[g] == gpd.src[h]:
                coeffs[i, slot[gpd.compose[(g, h)]], slot[h]] = 1.0
    return BigradedRep(G=G, blocks=blocks, coeffs=coeffs)


def _same_instance(G: FinitePQG, H: FinitePQG) -> bool:
    if G is H:
        return True
    if G.objects != H.objects or G.basis != H.basis:
        return False
    return all(
        np.array_equal(getattr(G, f), getattr(H, f))
        for f in ("mult", "star", "units", "coproduct")
    )


def tensor_reps(X: BigradedRep, Y: BigradedRep) -> BigradedRep:
    """Middle-matched tensor product: slots pair where X column grade meets Y row grade."""
    if not _same_instance(X.G, Y.G):
        raise ValueError("representations live over different instances")
    pairs = [
        (u, v)
        for u in range(X.space_dim)
        for v in range(Y.space_dim)
        if X.blocks[u][1] == Y.blocks[v][0]
    ]
    blocks = tuple((X.blocks[u][0], Y.blocks[v][1]) for u, v in pairs)
    mult = X.G.mult
    # Z_c[(u,v),(u',v')] = sum_{a,b} mult[a,b,c] X_a[u,u'] Y_b[v,v']
    full = np.einsum("abc,auU,bvV->cuvUV", mult, X.coeffs, Y.coeffs, optimize=True)
    rows = np.array([p[0] for p in pairs])
    cols = np.array([p[1] for p in pairs])
    coeffs = full[:, rows[:, None], cols[:, None], rows[None, :], cols[None, :]]
    return BigradedRep(G=X.G, blocks=blocks, coeffs=coeffs)


def _algebra_product_slices(G: FinitePQG, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Slices of (sum_a e_a (x) A_a)(sum_b e_b (x) B_b), via nonzero mult triples."""
    out = np.zeros_like(A)
    for a, b, c in zip(*np.nonzero(G.mult)):
        out[c] += G.mult[a, b, c] * (A[a] @ B[b])
    return out


def verify_rep(X: BigradedRep, tol: float = 1e-10, unitary: bool = True) -> list:
    """Comultiplication compatibility, block support, and optionally unitarity.

    Streams over coefficient slices so large tensor-product spaces stay
    within memory; block projections act as index masks, not dense matmuls.
    """
    G = X.G
    d, N = G.dim, X.space_dim
    n = G.n_objects
    out = []

    res = 0.0
    for a in range(d):
        lhs = np.einsum("ib,iuv->buv", G.coproduct[:, a, :], X.coeffs, optimize=True)
        rhs = X.coeffs[a] @ X.coeffs
        res = max(res, float(np.abs(lhs - rhs).max(initial=0.0)))
    out.append(CheckResult("co1", res <= tol, res))

    row_grade = np.array([b[0] for b in X.blocks])
    col_grade = np.array([b[1] for b in X.blocks])
    res = 0.0
    for k in range(n):
        for m in range(n):
            lm = G.left_mult_matrix(G.units[k, m])
            for l in range(n):
                for nn in range(n):
                    proj = G.right_mult_matrix(G.units[l, nn]) @ lm
                    left = np.einsum("ci,iuv->cuv", proj, X.coeffs, optimize=True)
                    rmask = (row_grade == k) & (col_grade == l)
                    cmask = (row_grade == m) & (col_grade == nn)
                    right = X.coeffs * rmask[None, :, None] * cmask[None, None, :]
                    res = max(res, float(np.abs(left - right).max(initial=0.0)))
    out.append(CheckResult("co2", res <= tol, res))

    if unitary:
        star_slices = np.einsum("ia,iuv->avu", G.star, X.coeffs.conj(), optimize=True)
        prod = _algebra_product_slices(G, star_slices, X.coeffs)
        target = np.zeros_like(prod)
        for m in range(n):
            mask = (col_grade == m).astype(float)
            target += np.einsum("c,uv->cuv", G.target_projection(m), np.diag(mask))
        res1 = float(np.abs(prod - target).max(initial=0.0))
        prod = _algebra_product_slices(G, X.coeffs, star_slices)
        target = np.zeros_like(prod)
        for k in range(n):
            mask = (row_grade == k).astype(float)
            target += np.einsum("c,uv->cuv", G.source_projection(k), np.diag(mask))
        res2 = float(np.abs(prod - target).max(initial=0.0))
        res = max(res1, res2)
        out.append(CheckResult("unitary", res <= tol, res))

    return out
