"""Assemble level-1 paired data and slice aux groups from disc configurations."""
from __future__ import annotations

from ..datum import PLDatumSide, PLPairedDatum, RamificationIndices
from ..kunneth import SliceAux
from .model import (OracleError, PuncturedDiscConfig, TwistedChainModel, build_model,
                    comparison_map, twisted_homology, variation)
from .pairing import intersection_pairing
from .words import full_twist


def loop_word(cfg: PuncturedDiscConfig) -> list[int]:
    """The X puncture going once counterclockwise around the whole A cluster."""
    p = cfg.p
    return full_twist(1, p) if p > 1 else []


def side_from_model(model: TwistedChainModel, braid: list[int]) -> PLDatumSide:
    h = {v: twisted_homology(model, v).space for v in ("rel_both", "rel_inner", "rel_outer", "abs")}
    return PLDatumSide(
        level=1, Hbar=h["rel_both"], H=h["rel_inner"], chibar=h["rel_outer"], chi=h["abs"],
        Jtilde=comparison_map(model, "rel_inner", "rel_both"),
        J=comparison_map(model, "abs", "rel_outer"),
        Vartilde=variation(model, braid, "lf"),
        Var=variation(model, braid, "compact"))


def slice_aux(cfg: PuncturedDiscConfig) -> SliceAux:
    """Phi (lf rel boundary) and psi (compact) of an A-only configuration, untwisted in X."""
    if cfg.x_puncture is not None:
        raise OracleError("the slice configuration must not contain the X puncture")
    a, b = build_model(cfg), build_model(cfg.inverted())
    return SliceAux(
        level=1, alpha1_is_one=True,
        phi=twisted_homology(a, "rel_both").space, psi=twisted_homology(a, "abs").space,
        phi_star=twisted_homology(b, "rel_both").space, psi_star=twisted_homology(b, "abs").space,
        P_aux=intersection_pairing(a, b, "P1"), P_aux_star=intersection_pairing(b, a, "P1"))


def base_datum(cfg: PuncturedDiscConfig) -> tuple[PLPairedDatum, SliceAux]:
    if cfg.x_puncture is None:
        raise OracleError("a base datum needs the X puncture")
    if not cfg.a_punctures:
        raise OracleError("a base datum needs at least one A puncture")
    braid = loop_word(cfg)
    a, b = build_model(cfg), build_model(cfg.inverted())
    alpha = RamificationIndices((cfg.x_puncture.weight,)
                                + tuple(q.weight for q in cfg.punctures()[:-1]))
    pd = PLPairedDatum(
        alpha, side_from_model(a, braid), side_from_model(b, braid),
        P1=intersection_pairing(a, b, "P1"), P2=intersection_pairing(a, b, "P2"),
        P1_star=intersection_pairing(b, a, "P1"), P2_star=intersection_pairing(b, a, "P2"))
    if alpha.alpha1_is_one():
        aux = slice_aux(cfg.a_only())
    else:
        aux = SliceAux.trivial(cfg.field, 1)
    return pd, aux
