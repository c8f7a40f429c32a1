"""Local Picard-Lefschetz data at a fixed level r.

One side of a datum holds the four groups

    Hbar  (lf, rel boundary)     H   (lf)
    chibar (compact, rel boundary) chi (compact)

with the comparison maps Jtilde: H -> Hbar, J: chi -> chibar and the variations
Vartilde: Hbar -> H, Var: chibar -> chi. Monodromies are always derived from
these, never stored.

A paired datum carries a side for alpha and a side for the inverted indices,
plus the four degree-complementary pairings

    P1:  Hbar(a)  x chi(a*)      P2:  H(a)  x chibar(a*)
    P1*: Hbar(a*) x chi(a)       P2*: H(a*) x chibar(a)

Adjointness convention. Both sides store the variation of the same loop. The
identity checked is

    P2(Vartilde x, y) == P1(x, V y),   V = -Var* o (mubar*)^-1,

where V is the dual-side variation of the reversed loop, and the same identity
with the roles of alpha and alpha* exchanged.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .graded import (GradedMap, GradedPairing, GradedSpace, adjoint_identity_check,
                     check_nondegenerate, compose, invert, is_isomorphism)
from .linalg import Matrix
from .scalars import Cyclotomic, Scalar, Symbolic, invert_indices


class DatumError(ValueError):
    pass


@dataclass(frozen=True)
class RamificationIndices:
    values: tuple[Scalar, ...]

    def __post_init__(self):
        vals = tuple(self.values)
        if not vals:
            raise DatumError("at least one ramification index is required")
        f = vals[0].field
        for v in vals:
            if v.field != f:
                raise DatumError("ramification indices live in different fields")
            if v.is_zero():
                raise DatumError("ramification indices must be nonzero")
        object.__setattr__(self, "values", vals)

    @property
    def field(self):
        return self.values[0].field

    @property
    def nu(self) -> int:
        return len(self.values)

    @property
    def alpha1(self) -> Scalar:
        return self.values[0]

    def alpha1_is_one(self) -> bool:
        return self.alpha1 == 1

    def inverted(self) -> "RamificationIndices":
        return RamificationIndices(tuple(invert_indices(self.values)))


@dataclass(frozen=True, eq=True)
class PLDatumSide:
    level: int
    Hbar: GradedSpace
    H: GradedSpace
    chibar: GradedSpace
    chi: GradedSpace
    Jtilde: GradedMap
    J: GradedMap
    Vartilde: GradedMap
    Var: GradedMap

    @property
    def field(self):
        return self.H.field

    def spaces(self) -> dict[str, GradedSpace]:
        return {"Hbar": self.Hbar, "H": self.H, "chibar": self.chibar, "chi": self.chi}

    def maps(self) -> dict[str, GradedMap]:
        return {"Jtilde": self.Jtilde, "J": self.J, "Vartilde": self.Vartilde, "Var": self.Var}

    def shape_errors(self) -> list[str]:
        want = {"Jtilde": ("H", "Hbar"), "J": ("chi", "chibar"),
                "Vartilde": ("Hbar", "H"), "Var": ("chibar", "chi")}
        sp = self.spaces()
        errs = []
        for name, (src, tgt) in want.items():
            m = getattr(self, name)
            if m.shift != 0:
                errs.append(f"{name} has shift {m.shift}")
            if m.source != sp[src]:
                errs.append(f"{name} source is not {src}")
            if m.target != sp[tgt]:
                errs.append(f"{name} target is not {tgt}")
        return errs


@dataclass(frozen=True)
class Monodromies:
    Mbar: GradedMap
    M: GradedMap
    mubar: GradedMap
    mu: GradedMap


def derive_monodromies(side: PLDatumSide) -> Monodromies:
    errs = side.shape_errors()
    if errs:
        raise DatumError("; ".join(errs))
    return Monodromies(
        Mbar=GradedMap.identity(side.Hbar) + compose(side.Jtilde, side.Vartilde),
        M=GradedMap.identity(side.H) + compose(side.Vartilde, side.Jtilde),
        mubar=GradedMap.identity(side.chibar) + compose(side.J, side.Var),
        mu=GradedMap.identity(side.chi) + compose(side.Var, side.J),
    )


def reversed_variation(side: PLDatumSide) -> GradedMap:
    """Compact variation of the inverse loop: -Var o mubar^-1 (chibar -> chi)."""
    mubar = derive_monodromies(side).mubar
    return -compose(side.Var, invert(mubar))


@dataclass(frozen=True)
class PLPairedDatum:
    alpha: RamificationIndices
    side: PLDatumSide
    side_star: PLDatumSide
    P1: GradedPairing
    P2: GradedPairing
    P1_star: GradedPairing
    P2_star: GradedPairing

    @property
    def level(self) -> int:
        return self.side.level

    @property
    def field(self):
        return self.side.field

    def pairings(self) -> dict[str, GradedPairing]:
        return {"P1": self.P1, "P2": self.P2, "P1*": self.P1_star, "P2*": self.P2_star}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    entries: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def failed(self) -> list[str]:
        return [e.name for e in self.entries if not e.passed]

    def __getitem__(self, name: str) -> CheckResult:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def __str__(self):
        return "\n".join(f"{'PASS' if e.passed else 'FAIL'} {e.name}"
                         + (f": {e.detail}" if e.detail else "") for e in self.entries)


CHECK_NAMES = ("shape coherence", "support window [0,2r]",
               "nondegenerate P1", "nondegenerate P2", "nondegenerate P1*", "nondegenerate P2*",
               "adjointness alpha", "adjointness alpha*")


def _shape_errors(pd: PLPairedDatum) -> list[str]:
    errs = []
    r = pd.side.level
    if pd.side_star.level != r:
        errs.append("the two sides have different levels")
    for tag, s in (("alpha", pd.side), ("alpha*", pd.side_star)):
        if s.field != pd.alpha.field:
            errs.append(f"{tag} side is over a different field")
        errs.extend(f"{tag}: {e}" for e in s.shape_errors())
    a, b = pd.side, pd.side_star
    want = {"P1": (a.Hbar, b.chi), "P2": (a.H, b.chibar),
            "P1*": (b.Hbar, a.chi), "P2*": (b.H, a.chibar)}
    for name, p in pd.pairings().items():
        left, right = want[name]
        if p.level != r:
            errs.append(f"{name} has level {p.level}, expected {r}")
        if p.left != left or p.right != right:
            errs.append(f"{name} pairs the wrong spaces")
    return errs


def _window_errors(pd: PLPairedDatum) -> list[str]:
    r = pd.level
    errs = []
    for tag, s in (("alpha", pd.side), ("alpha*", pd.side_star)):
        for name, sp in s.spaces().items():
            bad = [d for d in sp.degrees if not 0 <= d <= 2 * r]
            if bad:
                errs.append(f"{tag} {name} has degrees {bad} outside [0, {2 * r}]")
    return errs


def _adjoint(side: PLDatumSide, other: PLDatumSide, p: GradedPairing, q: GradedPairing) -> tuple[bool, str]:
    try:
        v = reversed_variation(other)
    except ZeroDivisionError:
        return False, "mubar of the dual side is singular"
    ok = adjoint_identity_check(side.Vartilde, v, p, q)
    return ok, "" if ok else "identity fails"


def validate(pd: PLPairedDatum) -> ValidationReport:
    rep = ValidationReport()
    errs = _shape_errors(pd)
    rep.entries.append(CheckResult("shape coherence", not errs, "; ".join(errs)))
    werrs = _window_errors(pd)
    rep.entries.append(CheckResult("support window [0,2r]", not werrs, "; ".join(werrs)))
    if errs:
        for name in CHECK_NAMES[2:]:
            rep.entries.append(CheckResult(name, False, "not evaluated: shape errors"))
        return rep
    for name, p in pd.pairings().items():
        rep.entries.append(CheckResult(f"nondegenerate {name}", check_nondegenerate(p)))
    ok, detail = _adjoint(pd.side, pd.side_star, pd.P1, pd.P2)
    rep.entries.append(CheckResult("adjointness alpha", ok, detail))
    ok, detail = _adjoint(pd.side_star, pd.side, pd.P1_star, pd.P2_star)
    rep.entries.append(CheckResult("adjointness alpha*", ok, detail))
    return rep


def dualize(pd: PLPairedDatum) -> PLPairedDatum:
    return PLPairedDatum(alpha=pd.alpha.inverted(), side=pd.side_star, side_star=pd.side,
                         P1=pd.P1_star, P2=pd.P2_star, P1_star=pd.P1, P2_star=pd.P2)


def monodromy_commutation(side: PLDatumSide) -> bool:
    """Jtilde M == Mbar Jtilde and Vartilde Mbar == M Vartilde (and the compact analogues)."""
    m = derive_monodromies(side)
    return (compose(side.Jtilde, m.M) == compose(m.Mbar, side.Jtilde)
            and compose(side.Vartilde, m.Mbar) == compose(m.M, side.Vartilde)
            and compose(side.J, m.mu) == compose(m.mubar, side.J)
            and compose(side.Var, m.mubar) == compose(m.mu, side.Var))


# --- random valid data -----------------------------------------------------

def _rand_scalar(F, rng: random.Random, lo: int = -3, hi: int = 3) -> Scalar:
    c = F.from_int(rng.randint(lo, hi))
    if isinstance(F, Cyclotomic) and F.degree > 1 and rng.random() < 0.3:
        c = c * F.zeta(rng.randrange(F.n))
    if isinstance(F, Symbolic) and rng.random() < 0.15:
        c = c * F.gens[rng.randrange(F.nu)]
    return c


def _rand_matrix(F, rng, rows, cols) -> Matrix:
    return Matrix(F, rows, cols, [[_rand_scalar(F, rng) for _ in range(cols)] for _ in range(rows)])


def _rand_invertible(F, rng, n) -> Matrix:
    while True:
        m = _rand_matrix(F, rng, n, n)
        if m.is_invertible():
            return m


def _space(F, dims: dict[int, int], prefix: str) -> GradedSpace:
    return GradedSpace.from_dims(F, {d: n for d, n in dims.items() if n}, prefix)


def random_alpha(F, rng: random.Random, nu: int = 2, alpha1_is_one: bool = False) -> RamificationIndices:
    def pick():
        if isinstance(F, Cyclotomic):
            return F.zeta(rng.randrange(1, F.n)) if F.n > 1 else F.one
        return F.gens[rng.randrange(F.nu)] ** rng.choice([1, 2, -1])
    vals = [F.one if alpha1_is_one else pick()]
    while len(vals) < nu:
        vals.append(pick())
    if not alpha1_is_one and vals[0] == 1:
        raise DatumError("cannot draw alpha1 != 1 in this field")
    return RamificationIndices(tuple(vals))


def random_datum(F, seed: int, level: int = 1, max_dim: int = 6, nu: int = 2,
                 alpha1_is_one: bool = False, max_tries: int = 200) -> PLPairedDatum:
    """A random datum satisfying every validation check.

    The alpha side and the four pairings are drawn at random; the alpha* maps
    are then solved for so that both adjointness identities hold, together
    with the adjointness of the comparison maps.
    """
    rng = random.Random(seed)
    alpha = random_alpha(F, rng, nu, alpha1_is_one)
    top = 2 * level
    degs = range(top + 1)
    for _ in range(max_tries):
        dH = {i: rng.randint(0, max_dim) for i in degs}
        dHb = {i: rng.randint(0, max_dim) for i in degs}
        dCb = {i: rng.randint(0, max_dim) for i in degs}
        dC = {i: rng.randint(0, max_dim) for i in degs}
        a_sp = dict(Hbar=_space(F, dHb, "hb"), H=_space(F, dH, "h"),
                    chibar=_space(F, dCb, "cb"), chi=_space(F, dC, "c"))
        b_sp = dict(Hbar=_space(F, {j: dC[top - j] for j in degs}, "hb*"),
                    H=_space(F, {j: dCb[top - j] for j in degs}, "h*"),
                    chibar=_space(F, {j: dH[top - j] for j in degs}, "cb*"),
                    chi=_space(F, {j: dHb[top - j] for j in degs}, "c*"))

        def rmap(src, tgt):
            return GradedMap(src, tgt, 0, {i: _rand_matrix(F, rng, tgt.dim(i), src.dim(i)) for i in degs})

        Jt = rmap(a_sp["H"], a_sp["Hbar"])
        Vt = rmap(a_sp["Hbar"], a_sp["H"])
        J = rmap(a_sp["chi"], a_sp["chibar"])
        Var = rmap(a_sp["chibar"], a_sp["chi"])
        side = PLDatumSide(level, a_sp["Hbar"], a_sp["H"], a_sp["chibar"], a_sp["chi"], Jt, J, Vt, Var)
        mon = derive_monodromies(side)
        if not all(is_isomorphism(getattr(mon, k)) for k in ("Mbar", "M", "mubar", "mu")):
            continue

        def rpair(left, right):
            return {i: _rand_invertible(F, rng, left.dim(i)) for i in degs if left.dim(i)}

        p1 = rpair(a_sp["Hbar"], b_sp["chi"])
        p2 = rpair(a_sp["H"], b_sp["chibar"])
        p1s = rpair(b_sp["Hbar"], a_sp["chi"])
        p2s = rpair(b_sp["H"], a_sp["chibar"])

        def blk(d, i, rows, cols):
            return d.get(i) or Matrix.zeros(F, rows, cols)

        W = reversed_variation(side)
        js, jts, vs, vts = {}, {}, {}, {}
        singular = False
        for i in degs:
            j = top - i
            P1 = blk(p1, i, dHb[i], dHb[i])
            P2 = blk(p2, i, dH[i], dH[i])
            # chi*_j -> chibar*_j and the reversed variation chibar*_j -> chi*_j
            js[j] = P2.inverse() @ Jt.block(i).T @ P1
            V = P1.inverse() @ Vt.block(i).T @ P2
            core = Matrix.identity(F, V.cols) + js[j] @ V
            if not core.is_invertible():
                singular = True
                break
            vs[j] = -(V @ core.inverse())
            # alpha* lf side in degree i, paired against alpha compact degree j
            P1s = blk(p1s, i, dC[j], dC[j])
            P2s = blk(p2s, i, dCb[j], dCb[j])
            jts[i] = (P1s.inverse().T @ J.block(j).T @ P2s.T)
            vts[i] = (P1s @ W.block(j) @ P2s.inverse()).T
        if singular:
            continue
        side_star = PLDatumSide(
            level, b_sp["Hbar"], b_sp["H"], b_sp["chibar"], b_sp["chi"],
            GradedMap(b_sp["H"], b_sp["Hbar"], 0, jts), GradedMap(b_sp["chi"], b_sp["chibar"], 0, js),
            GradedMap(b_sp["Hbar"], b_sp["H"], 0, vts), GradedMap(b_sp["chibar"], b_sp["chi"], 0, vs))
        mon_s = derive_monodromies(side_star)
        if not all(is_isomorphism(getattr(mon_s, k)) for k in ("Mbar", "M", "mubar", "mu")):
            continue
        return PLPairedDatum(
            alpha, side, side_star,
            GradedPairing(a_sp["Hbar"], b_sp["chi"], level, p1),
            GradedPairing(a_sp["H"], b_sp["chibar"], level, p2),
            GradedPairing(b_sp["Hbar"], a_sp["chi"], level, p1s),
            GradedPairing(b_sp["H"], a_sp["chibar"], level, p2s))
    raise DatumError(f"no valid random datum found in {max_tries} tries")


def scaled_vartilde(pd: PLPairedDatum, c) -> PLPairedDatum:
    """Copy of pd with the alpha-side Vartilde multiplied by c (a broken datum for tests)."""
    s = pd.side
    side = PLDatumSide(s.level, s.Hbar, s.H, s.chibar, s.chi, s.Jtilde, s.J, s.Vartilde.scale(c), s.Var)
    return PLPairedDatum(pd.alpha, side, pd.side_star, pd.P1, pd.P2, pd.P1_star, pd.P2_star)


def side_from_blocks(level: int, spaces: dict[str, GradedSpace],
                     maps: dict[str, dict[int, Matrix]]) -> PLDatumSide:
    sp = spaces
    return PLDatumSide(
        level, sp["Hbar"], sp["H"], sp["chibar"], sp["chi"],
        GradedMap(sp["H"], sp["Hbar"], 0, maps.get("Jtilde", {})),
        GradedMap(sp["chi"], sp["chibar"], 0, maps.get("J", {})),
        GradedMap(sp["Hbar"], sp["H"], 0, maps.get("Vartilde", {})),
        GradedMap(sp["chibar"], sp["chi"], 0, maps.get("Var", {})))


__all__: Sequence[str] = (
    "DatumError", "RamificationIndices", "PLDatumSide", "Monodromies", "PLPairedDatum",
    "CheckResult", "ValidationReport", "derive_monodromies", "reversed_variation",
    "validate", "dualize", "monodromy_commutation", "random_datum", "random_alpha",
    "scaled_vartilde", "side_from_blocks",
)
