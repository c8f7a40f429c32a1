"""JSON (de)serialization for data, disc configurations, scenarios and manifests.

Scalars are written in their canonical string form, degrees as string keys,
and documents are dumped with sorted keys, so equal objects serialize to
identical bytes. Structural validation uses the JSON Schemas shipped in
``stratpl/schemas``; semantic errors (block shapes, scalar syntax) name the
offending path.
"""
from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Any

import jsonschema

from .datum import PLDatumSide, PLPairedDatum, RamificationIndices
from .graded import GradedMap, GradedPairing, GradedSpace
from .kunneth import SliceAux
from .linalg import Matrix
from .oracle.model import Puncture, PuncturedDiscConfig
from .scalars import ScalarError, parse_mode

SCHEMAS = ("pl-datum-v1", "disc-config-v1", "scenario-v1", "manifest-v1")


class SchemaError(ValueError):
    """A document violates its schema; ``path`` locates the problem."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path or '<root>'}: {message}")
        self.path = path


class UnsupportedVersionError(SchemaError):
    pass


class ParseError(SchemaError):
    """Malformed JSON; the message carries source:line:column."""

    def __init__(self, message: str):
        ValueError.__init__(self, message)
        self.path = ""


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("stratpl").joinpath("schemas", f"{name}.schema.json").read_text("utf-8")
    return json.loads(text)


@lru_cache(maxsize=None)
def _validator(name: str):
    schema = load_schema(name)
    return jsonschema.validators.validator_for(schema)(schema)


def check_schema(doc: Any, name: str, base_path: str = "") -> None:
    """Structural validation, including the version tag."""
    if not isinstance(doc, dict):
        raise SchemaError(base_path, "expected a JSON object")
    tag = doc.get("schema")
    if tag != name:
        family = name.rsplit("-v", 1)[0]
        if isinstance(tag, str) and tag.startswith(family + "-v"):
            raise UnsupportedVersionError(_join(base_path, "schema"),
                                          f"unsupported version {tag!r} (this build reads {name!r})")
        raise SchemaError(_join(base_path, "schema"), f"expected {name!r}, got {tag!r}")
    errors = sorted(_validator(name).iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        path = ".".join(str(p) for p in e.absolute_path)
        raise SchemaError(_join(base_path, path), e.message)


def _join(a: str, b: str) -> str:
    return f"{a}.{b}" if a and b else (a or b)


# --- writing --------------------------------------------------------------

def _matrix(m: Matrix) -> list[list[str]]:
    return [[str(x) for x in row] for row in m.data]


def _space(s: GradedSpace) -> dict:
    return {str(d): list(s.labels(d)) for d in s.degrees}


def _map_blocks(f: GradedMap) -> dict:
    return {str(i): _matrix(m) for i, m in f.blocks.items()}


def _pairing(p: GradedPairing) -> dict:
    return {str(i): _matrix(m) for i, m in p.blocks.items()}


def _side(s: PLDatumSide) -> dict:
    return {"spaces": {k: _space(v) for k, v in s.spaces().items()},
            "maps": {k: _map_blocks(v) for k, v in s.maps().items()}}


def aux_to_dict(aux: SliceAux) -> dict:
    return {"level": aux.level, "alpha1_is_one": aux.alpha1_is_one,
            "spaces": {"phi": _space(aux.phi), "psi": _space(aux.psi),
                       "phi*": _space(aux.phi_star), "psi*": _space(aux.psi_star)},
            "pairings": {"P_aux": _pairing(aux.P_aux), "P_aux*": _pairing(aux.P_aux_star)}}


def datum_to_dict(pd: PLPairedDatum, aux: SliceAux | None = None) -> dict:
    return {
        "schema": "pl-datum-v1",
        "mode": pd.field.mode,
        "level": pd.level,
        "alpha": [str(a) for a in pd.alpha.values],
        "sides": {"alpha": _side(pd.side), "alpha*": _side(pd.side_star)},
        "pairings": {k: _pairing(v) for k, v in pd.pairings().items()},
        "aux": aux_to_dict(aux) if aux is not None else None,
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=1) + "\n"


def serialize(pd: PLPairedDatum, aux: SliceAux | None = None) -> str:
    return dumps(datum_to_dict(pd, aux))


def atomic_write(path: str, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --- reading --------------------------------------------------------------

def _field(doc: dict, path: str):
    try:
        return parse_mode(doc["mode"])
    except ScalarError as exc:
        raise SchemaError(_join(path, "mode"), str(exc)) from exc


def _scalar(F, text: str, path: str):
    try:
        return F.parse(text)
    except ScalarError as exc:
        raise SchemaError(path, str(exc)) from exc


def _read_space(F, doc: dict, path: str) -> GradedSpace:
    try:
        return GradedSpace(F, {int(d): v for d, v in doc.items()})
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from exc


def _read_matrix(F, rows: list, shape: tuple[int, int], path: str) -> Matrix:
    if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
        got = (len(rows), len(rows[0]) if rows else 0)
        raise SchemaError(path, f"block has shape {got[0]}x{got[1]}, expected {shape[0]}x{shape[1]}")
    return Matrix(F, shape[0], shape[1],
                  [[_scalar(F, x, f"{path}[{a}][{b}]") for b, x in enumerate(r)] for a, r in enumerate(rows)])


def _read_map(F, doc: dict, src: GradedSpace, tgt: GradedSpace, path: str) -> GradedMap:
    blocks = {}
    for d, rows in doc.items():
        i = int(d)
        blocks[i] = _read_matrix(F, rows, (tgt.dim(i), src.dim(i)), _join(path, d))
    return GradedMap(src, tgt, 0, blocks)


def _read_pairing(F, doc: dict, left: GradedSpace, right: GradedSpace, level: int, path: str) -> GradedPairing:
    blocks = {}
    for d, rows in doc.items():
        i = int(d)
        blocks[i] = _read_matrix(F, rows, (left.dim(i), right.dim(2 * level - i)), _join(path, d))
    return GradedPairing(left, right, level, blocks)


_MAP_ENDS = {"Jtilde": ("H", "Hbar"), "J": ("chi", "chibar"),
             "Vartilde": ("Hbar", "H"), "Var": ("chibar", "chi")}


def _read_side(F, doc: dict, level: int, path: str) -> PLDatumSide:
    sp = {k: _read_space(F, v, _join(path, f"spaces.{k}")) for k, v in doc["spaces"].items()}
    maps = {k: _read_map(F, doc["maps"][k], sp[a], sp[b], _join(path, f"maps.{k}"))
            for k, (a, b) in _MAP_ENDS.items()}
    return PLDatumSide(level, sp["Hbar"], sp["H"], sp["chibar"], sp["chi"],
                       maps["Jtilde"], maps["J"], maps["Vartilde"], maps["Var"])


def _read_aux(F, doc: dict, path: str) -> SliceAux:
    sp = {k: _read_space(F, v, _join(path, f"spaces.{k}")) for k, v in doc["spaces"].items()}
    m = doc["level"]
    P = _read_pairing(F, doc["pairings"]["P_aux"], sp["phi"], sp["psi*"], m, _join(path, "pairings.P_aux"))
    Ps = _read_pairing(F, doc["pairings"]["P_aux*"], sp["phi*"], sp["psi"], m, _join(path, "pairings.P_aux*"))
    try:
        return SliceAux(m, doc["alpha1_is_one"], sp["phi"], sp["psi"], sp["phi*"], sp["psi*"], P, Ps)
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from exc


def datum_from_dict(doc: Any, path: str = "") -> tuple[PLPairedDatum, SliceAux | None]:
    check_schema(doc, "pl-datum-v1", path)
    F = _field(doc, path)
    r = doc["level"]
    alpha = RamificationIndices(tuple(_scalar(F, a, _join(path, f"alpha[{k}]"))
                                      for k, a in enumerate(doc["alpha"])))
    a = _read_side(F, doc["sides"]["alpha"], r, _join(path, "sides.alpha"))
    b = _read_side(F, doc["sides"]["alpha*"], r, _join(path, "sides.alpha*"))
    pp = doc["pairings"]
    pj = lambda k: _join(path, f"pairings.{k}")
    pd = PLPairedDatum(
        alpha, a, b,
        _read_pairing(F, pp["P1"], a.Hbar, b.chi, r, pj("P1")),
        _read_pairing(F, pp["P2"], a.H, b.chibar, r, pj("P2")),
        _read_pairing(F, pp["P1*"], b.Hbar, a.chi, r, pj("P1*")),
        _read_pairing(F, pp["P2*"], b.H, a.chibar, r, pj("P2*")))
    aux = _read_aux(F, doc["aux"], _join(path, "aux")) if doc.get("aux") is not None else None
    return pd, aux


def deserialize(text: str) -> tuple[PLPairedDatum, SliceAux | None]:
    return datum_from_dict(parse_json(text))


def parse_json(text: str, source: str = "<string>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


# --- disc configurations ----------------------------------------------------

def config_to_dict(cfg: PuncturedDiscConfig) -> dict:
    pt = lambda q: {"position": str(Fraction(q.position)), "weight": str(q.weight)}
    return {"schema": "disc-config-v1", "mode": cfg.field.mode, "radius": str(cfg.radius),
            "a_punctures": [pt(q) for q in cfg.a_punctures],
            "x_puncture": pt(cfg.x_puncture) if cfg.x_puncture else None}


def config_from_dict(doc: Any, path: str = "") -> PuncturedDiscConfig:
    check_schema(doc, "disc-config-v1", path)
    F = _field(doc, path)

    def pt(d, p):
        try:
            pos = Fraction(d["position"])
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(_join(p, "position"), f"not an exact rational: {d['position']!r}") from exc
        return Puncture(pos, _scalar(F, d["weight"], _join(p, "weight")))

    a = tuple(pt(d, _join(path, f"a_punctures[{k}]")) for k, d in enumerate(doc["a_punctures"]))
    x = pt(doc["x_puncture"], _join(path, "x_puncture")) if doc.get("x_puncture") else None
    try:
        return PuncturedDiscConfig(a, x, Fraction(doc.get("radius", "0")))
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from exc
