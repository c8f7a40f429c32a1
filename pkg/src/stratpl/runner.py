"""Scenario loading, the check catalogue and the check manifest."""
from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from typing import Callable

from . import stabilize as st
from .datum import PLPairedDatum, derive_monodromies, dualize, monodromy_commutation, validate
from .graded import GradedMap, check_nondegenerate, compose, is_isomorphism, pairing_ranks
from .kunneth import SliceAux
from .oracle import model as om
from .oracle.datum import base_datum, loop_word
from .oracle.pairing import dual_chain_map_ok, stokes_ok
from .oracle.words import braid_inverse, delta_squared
from .scalars import ScalarError, parse_mode
from .serialize import (SchemaError, atomic_write, check_schema, config_from_dict, datum_from_dict,
                        dumps, parse_json, serialize)

CHECK_GROUPS = ("validate", "oracle", "signs", "iteration", "periodicity", "transport", "rank")

ANCHORS = {
    "oracle.boundary_squared": "boundary of boundary vanishes in the twisted cell complex",
    "oracle.euler_characteristic": "twisted Euler characteristic equals that of the complement",
    "oracle.duality": "compact and lf-relative dimensions are dual under weight inversion",
    "oracle.homotopic_words": "homotopic loop words induce equal maps on homology",
    "oracle.monodromy_consistency": "identity plus comparison after variation is the point-push action",
    "oracle.chain_maps": "point push and transverse maps commute with the boundary; Stokes identity",
    "oracle.aux_nondegenerate": "slice pairing of the auxiliary groups is nondegenerate",
    "base.validate": "shape, window, nondegenerate pairings, adjoint variations",
    "base.monodromy_commutation": "comparison maps intertwine the monodromies",
    "base.dualize_involution": "dualizing twice returns the datum",
    "signs.sign_A": "closed P2 sign equals the product of one-step signs",
    "signs.sign_B": "closed P1 sign equals the iterated one-step sign with transported mubar",
    "iteration_vs_closed": "iterated single steps equal the closed form",
    "validate": "stabilized datum passes validation",
    "monodromy_consistency": "derived monodromy equals (-1)^l times the transported one",
    "transport": "monodromies commute with the injections up to (-1)^l; identity on aux summands",
    "injections": "suspension injections are isomorphisms or injective with aux cokernel",
    "rank_bookkeeping": "dimension count of the stabilized groups",
    "aux_inclusion_rank": "aux summands inject with rank of the local Kunneth group",
    "periodicity": "structure at l and l+2 agree (operators exactly, pairings up to one global sign)",
    "p1_ranks": "ranks of the stabilized pairings and invertibility of the base mubar (reported)",
    "jtilde_aux": "Jtilde has no component into aux summands (an assumption of the construction, reported)",
}


class ScenarioError(ValueError):
    pass


@dataclass
class Scenario:
    name: str
    field: object
    levels: list[int]
    checks: list[str]
    sign_convention: str
    config: om.PuncturedDiscConfig | None = None
    datum: PLPairedDatum | None = None
    aux: SliceAux | None = None
    manifest_path: str = "manifest.json"
    data_dir: str = "data"


def load_scenario(path: str, levels: list[int] | None = None, sign_convention: str | None = None,
                  mode: str | None = None) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    doc = parse_json(text, path)
    check_schema(doc, "scenario-v1")
    declared = doc.get("mode")
    inner = doc.get("disc_config") or doc.get("datum")
    inner_mode = inner.get("mode") if isinstance(inner, dict) else None
    modes = {m for m in (declared, inner_mode, mode) if m is not None}
    if len(modes) > 1:
        raise ScenarioError(f"scalar mode inconsistency: {sorted(modes)}")
    if not modes:
        raise ScenarioError("no scalar mode given")
    try:
        F = parse_mode(modes.pop())
    except ScalarError as exc:
        raise ScenarioError(str(exc)) from exc
    sc = Scenario(
        name=doc.get("name", os.path.splitext(os.path.basename(path))[0]),
        field=F,
        levels=sorted(levels or doc["levels"]),
        checks=list(doc.get("checks", CHECK_GROUPS)),
        sign_convention=sign_convention or doc.get("sign_convention", st.STANDARD),
    )
    if sc.sign_convention not in st.SIGN_CONVENTIONS:
        raise ScenarioError(f"unknown sign convention {sc.sign_convention!r}")
    if any(l < 1 for l in sc.levels):
        raise ScenarioError("levels must be positive")
    outs = doc.get("outputs", {})
    sc.manifest_path = outs.get("manifest", sc.manifest_path)
    sc.data_dir = outs.get("data_dir", sc.data_dir)
    if "disc_config" in doc:
        sc.config = config_from_dict(doc["disc_config"], "disc_config")
        sc.datum, sc.aux = base_datum(sc.config)
    else:
        sc.datum, sc.aux = datum_from_dict(doc["datum"], "datum")
    if sc.aux is None:
        sc.aux = SliceAux.trivial(F, sc.datum.level, sc.datum.alpha.alpha1_is_one())
    return sc


# --- manifest ---------------------------------------------------------------

@dataclass
class CheckRecord:
    id: str
    anchor: str
    status: str
    detail: str = ""


@dataclass
class CheckManifest:
    scenario: str
    mode: str
    sign_convention: str
    checks: list[CheckRecord] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def add(self, cid: str, anchor: str, fn: Callable[[], tuple[str, str]]) -> None:
        if any(c.id == cid for c in self.checks):
            raise ValueError(f"duplicate check id {cid}")
        t0 = time.perf_counter()
        try:
            status, detail = fn()
        except Exception as exc:  # a crashing check is a failed check
            status, detail = "fail", f"{type(exc).__name__}: {exc}"
        self.timings[cid] = round(time.perf_counter() - t0, 6)
        self.checks.append(CheckRecord(cid, anchor, status, detail))

    def to_dict(self, with_timings: bool = True) -> dict:
        n = lambda s: sum(1 for c in self.checks if c.status == s)
        doc = {"schema": "manifest-v1", "scenario": self.scenario, "mode": self.mode,
               "sign_convention": self.sign_convention,
               "checks": [{"id": c.id, "anchor": c.anchor, "status": c.status, "detail": c.detail}
                          for c in self.checks],
               "summary": {"verdict": "pass" if self.passed else "fail",
                           "passed": n("pass"), "failed": n("fail"), "reported": n("reported")},
               "timings": dict(self.timings) if with_timings else {}}
        return doc


def _ok(b: bool, detail: str = "") -> tuple[str, str]:
    return ("pass" if b else "fail"), detail


# --- oracle checks ------------------------------------------------------------

def _oracle_checks(man: CheckManifest, cfg: om.PuncturedDiscConfig) -> None:
    a, b = om.build_model(cfg), om.build_model(cfg.inverted())
    p = cfg.p
    word = loop_word(cfg)

    def euler():
        bad = []
        for m in (a, b):
            chi = om.twisted_homology(m, "abs").space.euler_characteristic()
            if chi != 1 - p:
                bad.append(chi)
        return _ok(not bad, f"expected {1 - p}" + (f", got {bad}" if bad else ""))

    def duality():
        for x, y in ((a, b), (b, a)):
            ab = om.twisted_homology(x, "abs").space
            rb = om.twisted_homology(y, "rel_both").space
            if any(ab.dim(i) != rb.dim(2 - i) for i in range(3)):
                return _ok(False, "dimension mismatch")
        return _ok(True)

    def homotopic():
        # an inserted cancelling pair, and the loop as a quotient of two Garside squares
        words = [word + [1, -1] if p > 1 else [],
                 braid_inverse(delta_squared(1, p - 1)) + delta_squared(1, p) if p > 2 else []]
        if p >= 3:
            # conjugating by a braid of the A cluster alone
            words.append([1] + word + [-1])
        words = [w for w in words if w]
        for m in (a, b):
            h0 = om.point_push(m, word)
            ref = {v: om.induced_map(m, h0, v) for v in om.VARIANTS}
            for w in words:
                h = om.point_push(m, w)
                if any(om.induced_map(m, h, v) != ref[v] for v in om.VARIANTS):
                    return _ok(False, f"word {w} differs")
        return _ok(True, f"{len(words)} alternative words")

    def consistency():
        for m in (a, b):
            h = om.point_push(m, word)
            J = om.comparison_map(m, "abs", "rel_outer")
            Jt = om.comparison_map(m, "rel_inner", "rel_both")
            V = om.variation(m, word, "compact")
            Vt = om.variation(m, word, "lf")
            pairs = [(GradedMap.identity(J.target) + compose(J, V), "rel_outer"),
                     (GradedMap.identity(J.source) + compose(V, J), "abs"),
                     (GradedMap.identity(Jt.target) + compose(Jt, Vt), "rel_both"),
                     (GradedMap.identity(Jt.source) + compose(Vt, Jt), "rel_inner")]
            if any(x != om.induced_map(m, h, v) for x, v in pairs):
                return _ok(False)
        return _ok(True)

    def chain_maps():
        ok = all(om.is_chain_map(m, om.point_push(m, word)) for m in (a, b))
        for pair in ("P1", "P2"):
            ok = ok and dual_chain_map_ok(a, b, pair) and dual_chain_map_ok(b, a, pair)
            ok = ok and stokes_ok(a, pair) and stokes_ok(b, pair)
        return _ok(ok)

    man.add("oracle.boundary_squared", ANCHORS["oracle.boundary_squared"],
            lambda: _ok(a.dd_is_zero() and b.dd_is_zero()))
    man.add("oracle.euler_characteristic", ANCHORS["oracle.euler_characteristic"], euler)
    man.add("oracle.duality", ANCHORS["oracle.duality"], duality)
    man.add("oracle.homotopic_words", ANCHORS["oracle.homotopic_words"], homotopic)
    man.add("oracle.monodromy_consistency", ANCHORS["oracle.monodromy_consistency"], consistency)
    man.add("oracle.chain_maps", ANCHORS["oracle.chain_maps"], chain_maps)


def _sign_checks(man: CheckManifest) -> None:
    grid = [(i, l) for i in range(7) for l in range(1, 7)]
    man.add("signs.sign_A", ANCHORS["signs.sign_A"],
            lambda: _ok(all(st.sign_A(i, l) == st.iterated_sign_A(i, l) for i, l in grid), "i in 0..6, l in 1..6"))
    man.add("signs.sign_B", ANCHORS["signs.sign_B"],
            lambda: _ok(all(st.sign_B(i, l) == st.iterated_sign_B(i, l) for i, l in grid), "i in 0..6, l in 1..6"))


def _level_checks(man: CheckManifest, sc: Scenario, l: int, sd: st.StabilizedDatum) -> None:
    pd, aux, conv = sc.datum, sc.aux, sc.sign_convention
    pre = f"stab.l{l}."
    want = set(sc.checks)

    def add(name, fn):
        man.add(pre + name, ANCHORS[name], fn)

    if "iteration" in want:
        add("iteration_vs_closed", lambda: _ok(st.check_iteration_vs_closed(pd, aux, l, conv)))
    if "validate" in want:
        def v():
            rep = validate(sd.result)
            return _ok(rep.passed, ", ".join(rep.failed()))
        add("validate", v)
    if "signs" in want:
        add("monodromy_consistency", lambda: _ok(st.monodromy_consistency(sd)))
    if "transport" in want:
        def tr():
            res = st.transport_identities(sd)
            return _ok(all(res.values()), ", ".join(k for k, v in res.items() if not v))
        add("transport", tr)

        def inj():
            res = st.injection_checks(sd)
            return _ok(all(res.values()), ", ".join(k for k, v in res.items() if not v))
        add("injections", inj)
    if "rank" in want:
        add("rank_bookkeeping", lambda: _ok(st.rank_bookkeeping(sd)))
        add("aux_inclusion_rank", lambda: _ok(st.aux_inclusion_rank(sd)))

        def ranks():
            parts = []
            for name, p in sd.result.pairings().items():
                parts.append(f"{name}:{pairing_ranks(p)}:{'nondegenerate' if check_nondegenerate(p) else 'degenerate'}")
            inv = all(is_isomorphism(derive_monodromies(s).mubar) for s in (pd.side, pd.side_star))
            parts.append(f"base mubar {'invertible' if inv else 'singular'}")
            return "reported", "; ".join(parts)
        add("p1_ranks", ranks)
        if not aux.is_trivial:
            add("jtilde_aux", lambda: ("reported", "holds" if st.jtilde_aux_rows_vanish(sd) else "violated"))
    if "periodicity" in want:
        def per():
            if not aux.is_trivial:
                return "reported", "not applicable: aux groups are nonzero"
            ok, factor = st.periodicity_factor(pd, l, aux, conv)
            return _ok(ok and factor is not None,
                       f"operators {'equal' if ok else 'differ'}; pairing factor {factor}")
        add("periodicity", per)


def run_checks(sc: Scenario) -> tuple[CheckManifest, dict[int, st.StabilizedDatum]]:
    man = CheckManifest(sc.name, sc.field.mode, sc.sign_convention)
    want = set(sc.checks)
    pd = sc.datum
    if "oracle" in want and sc.config is not None:
        _oracle_checks(man, sc.config)
        if not sc.aux.is_trivial:
            man.add("oracle.aux_nondegenerate", ANCHORS["oracle.aux_nondegenerate"],
                    lambda: _ok(sc.aux.nondegenerate()))
    if "validate" in want:
        def v():
            rep = validate(pd)
            return _ok(rep.passed, ", ".join(rep.failed()))
        man.add("base.validate", ANCHORS["base.validate"], v)
        man.add("base.monodromy_commutation", ANCHORS["base.monodromy_commutation"],
                lambda: _ok(monodromy_commutation(pd.side) and monodromy_commutation(pd.side_star)))
        man.add("base.dualize_involution", ANCHORS["base.dualize_involution"],
                lambda: _ok(st.data_equal(dualize(dualize(pd)), pd)))
    if "signs" in want:
        _sign_checks(man)
    stabilized = {}
    for l in sc.levels:
        sd = st.stabilize_closed(pd, sc.aux, l, sc.sign_convention)
        stabilized[l] = sd
        _level_checks(man, sc, l, sd)
    return man, stabilized


# --- artifacts ------------------------------------------------------------------

def write_manifest(man: CheckManifest, path: str) -> None:
    atomic_write(path, dumps(man.to_dict()))


def write_data(sc: Scenario, out_dir: str, stabilized: dict[int, st.StabilizedDatum] | None = None) -> list[str]:
    d = os.path.join(out_dir, sc.data_dir)
    paths = [os.path.join(d, f"level_{sc.datum.level}.json")]
    texts = [serialize(sc.datum, sc.aux)]
    for l, sd in sorted((stabilized or {}).items()):
        paths.append(os.path.join(d, f"level_{sd.result.level}.json"))
        texts.append(serialize(sd.result))
    for p, t in zip(paths, texts):
        atomic_write(p, t)
    return paths


def run(path: str, out_dir: str, **overrides) -> CheckManifest:
    """Load a scenario, run its checks and write the manifest under ``out_dir``."""
    sc = load_scenario(path, **overrides)
    man, _ = run_checks(sc)
    write_manifest(man, os.path.join(out_dir, sc.manifest_path))
    return man


def render_report(doc: dict) -> str:
    lines = [f"scenario {doc['scenario']} ({doc['mode']}, {doc['sign_convention']} signs)"]
    for c in doc["checks"]:
        tail = f" [{c['detail']}]" if c["detail"] else ""
        lines.append(f"{c['status'].upper():8} {c['id']}: {c['anchor']}{tail}")
    s = doc["summary"]
    lines.append(f"verdict {s['verdict']}: {s['passed']} passed, {s['failed']} failed, {s['reported']} reported")
    return "\n".join(lines) + "\n"


__all__ = ["Scenario", "ScenarioError", "SchemaError", "CheckManifest", "CheckRecord", "load_scenario",
           "run_checks", "run", "write_manifest", "write_data", "render_report", "CHECK_GROUPS"]
