"""Twisted cellular chains of a disc with punctures on the real axis.

Cells (p punctures at positions 1..p, left to right):

* vertices ``b0`` (bottom of the outer circle) and ``b1..bp`` (bottoms of the inner circles),
* edges ``o`` (outer circle), ``c1..cp`` (inner circles), ``s1..sp`` (spokes b0 -> bj),
  circles oriented counterclockwise,
* one face ``F`` attached along o x_1^-1 ... x_p^-1 with x_j = s_j c_j s_j^-1.

Holonomy: a loop crossing upward cuts above the punctures picks up the weight
of each puncture it winds around, so hol(c_j) = w_j, hol(o) = prod w, hol(s_j) = 1.

A chain coefficient lives in the fibre at the start of its cell and the boundary
of an edge e is hol(e) * end(e) - start(e).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..graded import GradedMap, GradedSpace
from ..linalg import Matrix
from ..scalars import Scalar
from .words import BraidError, Letter, braid_action, edges, relator

VARIANTS = ("abs", "rel_outer", "rel_inner", "rel_both")


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class Puncture:
    position: Fraction
    weight: Scalar


@dataclass(frozen=True)
class PuncturedDiscConfig:
    a_punctures: tuple[Puncture, ...]
    x_puncture: Puncture | None = None
    radius: Fraction = Fraction(0)

    def __post_init__(self):
        pts = list(self.a_punctures) + ([self.x_puncture] if self.x_puncture else [])
        if not pts:
            raise OracleError("at least one puncture is required")
        field_ = pts[0].weight.field
        pos = [Fraction(q.position) for q in pts]
        if len(set(pos)) != len(pos):
            raise OracleError("puncture positions must be pairwise distinct")
        r = Fraction(self.radius)
        if r <= 0:
            r = 2 * max(abs(x) for x in pos) + 1
            object.__setattr__(self, "radius", r)
        if any(abs(x) >= r for x in pos):
            raise OracleError("punctures must lie strictly inside the disc")
        for q in pts:
            if q.weight.field != field_:
                raise OracleError("weights live in different fields")
            if q.weight.is_zero():
                raise OracleError("weights must be nonzero")
        if self.x_puncture is not None and self.a_punctures:
            if self.x_puncture.position <= max(q.position for q in self.a_punctures):
                raise OracleError("the X puncture must lie to the right of the A cluster")

    @property
    def field(self):
        return self.punctures()[0].weight.field

    def punctures(self) -> list[Puncture]:
        """All punctures ordered by position (X, if present, is last)."""
        return sorted(self.a_punctures, key=lambda q: q.position) + (
            [self.x_puncture] if self.x_puncture else [])

    @property
    def p(self) -> int:
        return len(self.punctures())

    def weights(self) -> list[Scalar]:
        return [q.weight for q in self.punctures()]

    def inverted(self) -> "PuncturedDiscConfig":
        inv = lambda q: Puncture(q.position, q.weight.inverse())
        return PuncturedDiscConfig(tuple(inv(q) for q in self.a_punctures),
                                   inv(self.x_puncture) if self.x_puncture else None, self.radius)

    def a_only(self) -> "PuncturedDiscConfig":
        return PuncturedDiscConfig(self.a_punctures, None, self.radius)


def cells(p: int) -> dict[int, list[str]]:
    return {0: ["b0"] + [f"b{j}" for j in range(1, p + 1)],
            1: ["o"] + [f"c{j}" for j in range(1, p + 1)] + [f"s{j}" for j in range(1, p + 1)],
            2: ["F"]}


def _edge_name(kind: str, j: int) -> str:
    return "o" if kind == "o" else f"{kind}{j}"


def _excluded(variant: str, p: int) -> set[str]:
    outer = {"b0", "o"}
    inner = {f"b{j}" for j in range(1, p + 1)} | {f"c{j}" for j in range(1, p + 1)}
    return {"abs": set(), "rel_outer": outer, "rel_inner": inner, "rel_both": outer | inner}[variant]


@dataclass
class TwistedChainModel:
    """Chains C_k as coefficient vectors over ``cells[k]``; ``boundary[k]``: C_k -> C_{k-1}."""
    config: PuncturedDiscConfig
    weights: list[Scalar]
    cells: dict[int, list[str]]
    boundary: dict[int, Matrix]
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def field(self):
        return self.weights[0].field

    @property
    def p(self) -> int:
        return len(self.weights)

    def hol(self, kind: str, j: int) -> Scalar:
        if kind == "o":
            out = self.field.one
            for w in self.weights:
                out = out * w
            return out
        if kind == "c":
            return self.weights[j - 1]
        return self.field.one

    def start(self, kind: str, j: int) -> str:
        return "b0" if kind in ("o", "s") else f"b{j}"

    def end(self, kind: str, j: int) -> str:
        return "b0" if kind == "o" else f"b{j}"

    def word_hol(self, word: Sequence[Letter]) -> Scalar:
        out = self.field.one
        for k, j, e in word:
            h = self.hol(k, j)
            out = out * (h if e > 0 else h.inverse())
        return out

    def chain_of_word(self, word: Sequence[Letter], coeff: Scalar | None = None) -> list[Scalar]:
        """The 1-chain traced by a path, starting with fibre value ``coeff``."""
        F = self.field
        vec = {c: F.zero for c in self.cells[1]}
        acc = coeff if coeff is not None else F.one
        for k, j, e in word:
            h = self.hol(k, j)
            name = _edge_name(k, j)
            if e > 0:
                vec[name] = vec[name] + acc
                acc = acc * h
            else:
                acc = acc * h.inverse()
                vec[name] = vec[name] - acc
        return [vec[c] for c in self.cells[1]]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(v) for k, v in self.cells.items())

    def dd_is_zero(self) -> bool:
        return (self.boundary[1] @ self.boundary[2]).is_zero()


def build_model(cfg: PuncturedDiscConfig, weights: Sequence[Scalar] | None = None) -> TwistedChainModel:
    w = list(weights) if weights is not None else cfg.weights()
    p = len(w)
    cs = cells(p)
    F = w[0].field
    model = TwistedChainModel(cfg, w, cs, {})
    d1 = Matrix.zeros(F, len(cs[0]), len(cs[1])).copy_data()
    vidx = {c: k for k, c in enumerate(cs[0])}
    for col, (kind, j) in enumerate(edges(p)):
        d1[vidx[model.end(kind, j)]][col] = d1[vidx[model.end(kind, j)]][col] + model.hol(kind, j)
        d1[vidx[model.start(kind, j)]][col] = d1[vidx[model.start(kind, j)]][col] - F.one
    d2 = model.chain_of_word(relator(p))
    model.boundary = {1: Matrix(F, len(cs[0]), len(cs[1]), d1),
                      2: Matrix(F, len(cs[1]), 1, [[x] for x in d2])}
    return model


# --- relative complexes and homology --------------------------------------

@dataclass
class Homology:
    """A chosen basis of H_k(model, variant) with cycle representatives and a coordinate solver."""
    variant: str
    cells: dict[int, list[str]]
    boundary: dict[int, Matrix]
    reps: dict[int, list[list[Scalar]]]
    space: GradedSpace
    _solvers: dict = field(default_factory=dict, repr=False)

    def coordinates(self, k: int, z: Sequence[Scalar]) -> list[Scalar]:
        """Coordinates of the class of the cycle z in the chosen basis."""
        reps = self.reps.get(k, [])
        F = self.space.field
        if not reps:
            return []
        bnd = self.boundary.get(k + 1)
        cols = [list(r) for r in reps]
        if bnd is not None:
            cols += bnd.col_lists()
        n = len(self.cells[k])
        A = Matrix(F, n, len(cols), [[c[i] for c in cols] for i in range(n)])
        x = A.solve(list(z))
        if x is None:
            raise OracleError(f"chain is not a cycle of {self.variant} in degree {k}")
        return x[:len(reps)]

    def coordinate_matrix(self, k: int, chains: Sequence[Sequence[Scalar]]) -> Matrix:
        F = self.space.field
        cols = [self.coordinates(k, z) for z in chains]
        return Matrix(F, len(self.reps.get(k, [])), len(cols),
                      [[c[i] for c in cols] for i in range(len(self.reps.get(k, [])))])

    def lift(self, k: int, z: Sequence[Scalar], to_cells: Sequence[str]) -> list[Scalar]:
        """Extend a relative chain by zero on the cells of a bigger complex."""
        F = self.space.field
        val = dict(zip(self.cells[k], z))
        return [val.get(c, F.zero) for c in to_cells]


def relative_complex(model: TwistedChainModel, variant: str) -> tuple[dict, dict]:
    if variant not in VARIANTS:
        raise OracleError(f"unknown variant {variant!r}")
    ex = _excluded(variant, model.p)
    keep = {k: [c for c in v if c not in ex] for k, v in model.cells.items()}
    bnd = {}
    for k in (1, 2):
        rows = [model.cells[k - 1].index(c) for c in keep[k - 1]]
        cols = [model.cells[k].index(c) for c in keep[k]]
        bnd[k] = model.boundary[k].submatrix(rows, cols)
    return keep, bnd


def twisted_homology(model: TwistedChainModel, variant: str) -> Homology:
    key = ("hom", variant)
    if key in model._cache:
        return model._cache[key]
    keep, bnd = relative_complex(model, variant)
    F = model.field
    reps, basis = {}, {}
    for k in (0, 1, 2):
        n = len(keep[k])
        if n == 0:
            continue
        cyc = bnd[k].nullspace() if k in bnd and bnd[k].rows else [
            [F.one if a == b else F.zero for a in range(n)] for b in range(n)]
        span = bnd[k + 1].col_lists() if (k + 1) in bnd and bnd[k + 1].cols else []
        chosen = []
        rank = Matrix(F, n, len(span), [[c[i] for c in span] for i in range(n)]).rank() if span else 0
        for z in cyc:
            trial = span + chosen + [z]
            m = Matrix(F, n, len(trial), [[c[i] for c in trial] for i in range(n)])
            if m.rank() > rank:
                chosen.append(z)
                rank += 1
        if chosen:
            reps[k] = chosen
            basis[k] = [f"{variant}{k}.{a}<{','.join(c for c, x in zip(keep[k], z) if not x.is_zero())}>"
                        for a, z in enumerate(chosen)]
    out = Homology(variant, keep, bnd, reps, GradedSpace(F, basis))
    model._cache[key] = out
    return out


# --- point push, variations, comparison maps ------------------------------

def point_push(model: TwistedChainModel, braid: Sequence[int]) -> dict[int, Matrix]:
    """Chain self-map of C(model) induced by a pure braid word, identity on the outer circle."""
    p = model.p
    F = model.field
    img = braid_action(braid, p)
    lam = {j: model.word_hol(img[("s", j)]) for j in range(1, p + 1)}
    v = {"b0": F.one, **{f"b{j}": lam[j] for j in range(1, p + 1)}}
    c0 = model.cells[0]
    m0 = Matrix.diag(F, [v[c] for c in c0])
    cols = []
    for kind, j in edges(p):
        cols.append(model.chain_of_word(img[(kind, j)], v[model.start(kind, j)]))
    n1 = len(model.cells[1])
    m1 = Matrix(F, n1, n1, [[c[i] for c in cols] for i in range(n1)])
    m2 = Matrix.identity(F, 1)
    return {0: m0, 1: m1, 2: m2}


def is_chain_map(model: TwistedChainModel, h: dict[int, Matrix]) -> bool:
    return all(model.boundary[k] @ h[k] == h[k - 1] @ model.boundary[k] for k in (1, 2))


def _restrict(model: TwistedChainModel, h: dict[int, Matrix], variant: str) -> dict[int, Matrix]:
    keep, _ = relative_complex(model, variant)
    out = {}
    for k in (0, 1, 2):
        idx = [model.cells[k].index(c) for c in keep[k]]
        out[k] = h[k].submatrix(idx, idx)
    return out


def induced_map(model: TwistedChainModel, h: dict[int, Matrix], variant: str) -> GradedMap:
    """The map induced on H(model, variant) by a chain map preserving both subcomplexes."""
    hom = twisted_homology(model, variant)
    hr = _restrict(model, h, variant)
    blocks = {k: hom.coordinate_matrix(k, [hr[k].apply(z) for z in zs]) for k, zs in hom.reps.items()}
    return GradedMap(hom.space, hom.space, 0, blocks)


def variation(model: TwistedChainModel, braid: Sequence[int], flavor: str) -> GradedMap:
    """compact: chibar -> chi, lf: Hbar -> H; x |-> h(x) - x on a lifted representative."""
    if flavor == "compact":
        src_v, tgt_v = "rel_outer", "abs"
    elif flavor == "lf":
        src_v, tgt_v = "rel_both", "rel_inner"
    else:
        raise OracleError(f"unknown variation flavor {flavor!r}")
    h = point_push(model, braid)
    src, tgt = twisted_homology(model, src_v), twisted_homology(model, tgt_v)
    ht = _restrict(model, h, tgt_v)
    blocks = {}
    for k, zs in src.reps.items():
        chains = []
        for z in zs:
            lifted = src.lift(k, z, tgt.cells[k])
            hz = ht[k].apply(lifted)
            chains.append([a - b for a, b in zip(hz, lifted)])
        blocks[k] = tgt.coordinate_matrix(k, chains)
    return GradedMap(src.space, tgt.space, 0, blocks)


def comparison_map(model: TwistedChainModel, src_v: str, tgt_v: str) -> GradedMap:
    """Quotient map between relative homologies (abs -> rel_outer, rel_inner -> rel_both)."""
    src, tgt = twisted_homology(model, src_v), twisted_homology(model, tgt_v)
    if not set(tgt.cells[0]) <= set(src.cells[0]) or not set(tgt.cells[1]) <= set(src.cells[1]):
        raise OracleError(f"no quotient map from {src_v} to {tgt_v}")
    blocks = {}
    for k, zs in src.reps.items():
        chains = []
        for z in zs:
            val = dict(zip(src.cells[k], z))
            chains.append([val[c] for c in tgt.cells[k]])
        blocks[k] = tgt.coordinate_matrix(k, chains)
    return GradedMap(src.space, tgt.space, 0, blocks)


def homology_dims(model: TwistedChainModel) -> dict[str, dict[int, int]]:
    return {v: twisted_homology(model, v).space.dims for v in VARIANTS}


__all__ = ["BraidError", "OracleError", "Puncture", "PuncturedDiscConfig", "TwistedChainModel",
           "VARIANTS", "build_model", "twisted_homology", "point_push", "variation",
           "comparison_map", "induced_map", "is_chain_map", "homology_dims", "relative_complex"]
