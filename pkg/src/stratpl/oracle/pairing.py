"""Intersection pairings between the alpha model and the inverted-weight model.

Dual-side chains are pushed onto small transverse complexes:

* the graph G: one vertex ``v`` (inside the face) and loops ``u1..up``,
  u_k crossing the spoke s_k once near the outer base vertex;
* its cone rel the outer circle: G plus an arc ``w`` from the outer circle to v
  (crossing o once) and a 2-cell ``W`` (the collar along the outer circle).

In the fundamental group, u_k = Y_k x_k^-1 Y_k^-1 with Y_k = x_p ... x_{k+1}, so
x_k = Y_k^-1 u_k^-1 Y_k and o = u_1^-1 ... u_p^-1. Transverse cells pair with
holonomy-weighted signs; the Stokes identity is checked, not assumed.
"""
from __future__ import annotations

from typing import Sequence

from ..graded import GradedPairing
from ..linalg import Matrix
from ..scalars import Scalar
from .model import OracleError, TwistedChainModel, relative_complex, twisted_homology
from .words import Letter


def _u_word_x(j: int, p: int) -> list[Letter]:
    ys = [("u", k, -1) for k in range(j + 1, p + 1)]
    return [("u", k, 1) for k in range(p, j, -1)] + [("u", j, -1)] + ys


def _u_word_o(p: int) -> list[Letter]:
    return [("u", k, -1) for k in range(1, p + 1)]


class DualComplex:
    """G (cone=False) or its cone rel the outer circle (cone=True), with the
    holonomy of the dual system: hol(u_k) = w_k, the primal weight."""

    def __init__(self, primal_weights: Sequence[Scalar], cone: bool):
        self.w = list(primal_weights)
        self.p = len(self.w)
        F = self.w[0].field
        self.field = F
        self.cone = cone
        self.cells = {0: ["v"], 1: [f"u{k}" for k in range(1, self.p + 1)] + (["w"] if cone else []),
                      2: ["W"] if cone else []}
        d1 = [[self.w[k] - 1 for k in range(self.p)] + ([F.one] if cone else [])]
        self.boundary = {1: Matrix(F, 1, len(self.cells[1]), d1)}
        if cone:
            col = self.chain(_u_word_o(self.p))
            col[-1] = col[-1] - (self.total_inv - 1)
            self.boundary[2] = Matrix(F, len(col), 1, [[x] for x in col])
        else:
            self.boundary[2] = Matrix(F, len(self.cells[1]), 0)

    @property
    def total_inv(self) -> Scalar:
        out = self.field.one
        for x in self.w:
            out = out / x
        return out

    def chain(self, word: Sequence[Letter], coeff: Scalar | None = None) -> list[Scalar]:
        F = self.field
        vec = {c: F.zero for c in self.cells[1]}
        acc = coeff if coeff is not None else F.one
        for _, k, e in word:
            h = self.w[k - 1]
            name = f"u{k}"
            if e > 0:
                vec[name] = vec[name] + acc
                acc = acc * h
            else:
                acc = acc * h.inverse()
                vec[name] = vec[name] - acc
        return [vec[c] for c in self.cells[1]]


def _chain_map(dual_model: TwistedChainModel, comp: DualComplex, variant: str) -> dict[int, Matrix]:
    """Matrices of the map from C(dual model, variant) to the transverse complex."""
    keep, _ = relative_complex(dual_model, variant)
    F = comp.field
    p = comp.p
    cols = {0: [], 1: [], 2: []}
    for c in keep[0]:
        cols[0].append([F.one])
    zero1 = [F.zero] * len(comp.cells[1])
    for c in keep[1]:
        if c == "o":
            cols[1].append(comp.chain(_u_word_o(p)))
        elif c.startswith("c"):
            cols[1].append(comp.chain(_u_word_x(int(c[1:]), p)))
        elif comp.cone:
            v = list(zero1)
            v[comp.cells[1].index("w")] = F.one
            cols[1].append(v)
        else:
            cols[1].append(list(zero1))
    for c in keep[2]:
        cols[2].append([-F.one] if comp.cone else [])
    out = {}
    for k in (0, 1, 2):
        n = len(comp.cells[k])
        out[k] = Matrix(F, n, len(cols[k]), [[col[i] for col in cols[k]] for i in range(n)])
    return out


def _form(primal: TwistedChainModel, comp: DualComplex, variant: str) -> dict[int, Matrix]:
    """B[k]: primal cells of degree k (in ``variant``) against transverse cells of degree 2-k."""
    keep, _ = relative_complex(primal, variant)
    F = primal.field
    w = primal.weights
    p = primal.p
    tail = {j: F.one for j in range(1, p + 1)}
    for j in range(1, p + 1):
        for i in range(j + 1, p + 1):
            tail[j] = tail[j] / w[i - 1]
    total_inv = comp.total_inv
    out = {}
    for k in (0, 1, 2):
        rows, cols = keep[k], comp.cells[2 - k]
        data = [[F.zero] * len(cols) for _ in rows]
        for a, c in enumerate(rows):
            for b, d in enumerate(cols):
                if c.startswith("s") and d == f"u{c[1:]}":
                    data[a][b] = tail[int(c[1:])]
                elif c == "F" and d == "v":
                    data[a][b] = F.one
                elif c == "o" and d == "w":
                    data[a][b] = F.one
                elif c == "b0" and d == "W":
                    data[a][b] = -total_inv
        out[k] = Matrix(F, len(rows), len(cols), data)
    return out


_PAIRS = {"P1": ("rel_both", "abs", False), "P2": ("rel_inner", "rel_outer", True)}


def _check_models(model_a: TwistedChainModel, model_b: TwistedChainModel) -> None:
    if model_a.p != model_b.p or any(x * y != 1 for x, y in zip(model_a.weights, model_b.weights)):
        raise OracleError("the dual model must carry the inverted weights of the same configuration")


def dual_chain_map_ok(model_a: TwistedChainModel, model_b: TwistedChainModel, pair: str) -> bool:
    _, dual_v, cone = _PAIRS[pair]
    comp = DualComplex(model_a.weights, cone)
    phi = _chain_map(model_b, comp, dual_v)
    _, bnd = relative_complex(model_b, dual_v)
    return all(comp.boundary[k] @ phi[k] == phi[k - 1] @ bnd[k] for k in (1, 2))


def stokes_ok(model_a: TwistedChainModel, pair: str) -> bool:
    """B(d a, b) == (-1)^|a| B(a, d b) on all cells."""
    prim_v, _, cone = _PAIRS[pair]
    comp = DualComplex(model_a.weights, cone)
    B = _form(model_a, comp, prim_v)
    _, bnd = relative_complex(model_a, prim_v)
    for k in (1, 2):
        # a of degree k, b of degree 3-k
        lhs = bnd[k].T @ B[k - 1]
        rhs = (B[k] @ comp.boundary[3 - k]).scale((-1) ** k)
        if lhs != rhs:
            return False
    return True


def intersection_pairing(model_a: TwistedChainModel, model_b: TwistedChainModel, pair: str) -> GradedPairing:
    """P1: H(rel_both, a) x H(abs, b); P2: H(rel_inner, a) x H(rel_outer, b); level 1."""
    if pair not in _PAIRS:
        raise OracleError(f"unknown pairing {pair!r}")
    _check_models(model_a, model_b)
    prim_v, dual_v, cone = _PAIRS[pair]
    comp = DualComplex(model_a.weights, cone)
    phi = _chain_map(model_b, comp, dual_v)
    B = _form(model_a, comp, prim_v)
    left, right = twisted_homology(model_a, prim_v), twisted_homology(model_b, dual_v)
    F = model_a.field
    blocks = {}
    for i, xs in left.reps.items():
        ys = right.reps.get(2 - i, [])
        if not ys:
            continue
        X = Matrix(F, len(xs[0]), len(xs), [[x[r] for x in xs] for r in range(len(xs[0]))])
        Y = Matrix(F, len(ys[0]), len(ys), [[y[r] for y in ys] for r in range(len(ys[0]))])
        blocks[i] = X.T @ B[i] @ phi[2 - i] @ Y
    return GradedPairing(left.space, right.space, 1, blocks)
