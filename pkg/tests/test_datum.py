import dataclasses

import pytest

from stratpl.datum import (CHECK_NAMES, DatumError, PLPairedDatum, RamificationIndices,
                           derive_monodromies, dualize, monodromy_commutation, random_datum,
                           scaled_vartilde, side_from_blocks, validate)
from stratpl.graded import GradedMap, GradedPairing, GradedSpace
from stratpl.linalg import Matrix
from stratpl.oracle.datum import base_datum
from stratpl.scalars import parse_mode
from stratpl.stabilize import data_equal

from conftest import disc

Q = parse_mode("cyclotomic:1")


def one_dim_side(jt, vt, level=1, F=Q):
    sp = {k: GradedSpace(F, {level: [f"{k}1"]}) for k in ("Hbar", "H", "chibar", "chi")}
    m = lambda x: {level: Matrix.from_rows(F, [[x]])}
    return side_from_blocks(level, sp, {"Jtilde": m(jt), "J": m(jt), "Vartilde": m(vt), "Var": m(vt)})


def test_zero_variation_trivial_monodromy():
    mono = derive_monodromies(one_dim_side(1, 0))
    assert mono.Mbar == GradedMap.identity(mono.Mbar.source)
    assert mono.M == GradedMap.identity(mono.M.source)


def test_one_dim_monodromy():
    v = Q.from_int(5)
    mono = derive_monodromies(one_dim_side(1, v))
    assert mono.M.block(1) == Matrix.from_rows(Q, [[1 + v]])
    assert mono.Mbar.block(1) == mono.M.block(1)


def test_classical_mubar_is_st(classical, Qst):
    s, t = Qst.gen("s"), Qst.gen("t")
    mubar = derive_monodromies(classical[0].side).mubar
    assert mubar.degrees() == [1]
    assert mubar.block(1) == Matrix.from_rows(Qst, [[s * t]])


def self_dual():
    side = one_dim_side(1, 0)
    one = Matrix.from_rows(Q, [[1]])
    p = lambda a, b: GradedPairing(a, b, 1, {1: one})
    return PLPairedDatum(RamificationIndices((Q.one, Q.one)), side, side,
                         p(side.Hbar, side.chi), p(side.H, side.chibar),
                         p(side.Hbar, side.chi), p(side.H, side.chibar))


def test_self_dual():
    pd = self_dual()
    assert validate(pd).passed
    assert data_equal(dualize(pd), pd)


def test_degenerate_P1_fails(classical):
    pd = classical[0]
    bad = dataclasses.replace(pd, P1=GradedPairing(pd.P1.left, pd.P1.right, 1))
    rep = validate(bad)
    assert "nondegenerate P1" in rep.failed()
    assert rep["nondegenerate P2"].passed


def test_oracle_datum_validates(classical):
    rep = validate(classical[0])
    assert [e.name for e in rep.entries] == list(CHECK_NAMES)
    assert rep.passed, str(rep)


def test_one_sided_scaling_fails(classical):
    rep = validate(scaled_vartilde(classical[0], 2))
    assert not rep["adjointness alpha"].passed
    assert rep["adjointness alpha*"].passed


def test_dualize_involution(classical):
    pd = classical[0]
    assert data_equal(dualize(dualize(pd)), pd)


def test_dualize_matches_inverted_oracle(Qst):
    s, t = Qst.gen("s"), Qst.gen("t")
    pd, _ = base_datum(disc([s], t))
    inv, _ = base_datum(disc([1 / s], 1 / t))
    assert data_equal(dualize(pd), inv)


def test_shape_incoherence_reported(classical):
    pd = classical[0]
    other = GradedSpace.from_dims(pd.field, {1: 2})
    bad = dataclasses.replace(pd, P2=GradedPairing(other, other, 1))
    rep = validate(bad)
    assert not rep["shape coherence"].passed
    assert "P2 pairs the wrong spaces" in rep["shape coherence"].detail


def test_window_violation():
    side = one_dim_side(1, 0, level=3)
    side = dataclasses.replace(side, level=1)
    pairs = [GradedPairing(a, b, 1) for a, b in ((side.Hbar, side.chi), (side.H, side.chibar)) * 2]
    pd = PLPairedDatum(RamificationIndices((Q.one,)), side, side, *pairs)
    rep = validate(pd)
    assert not rep["support window [0,2r]"].passed
    assert rep["shape coherence"].passed


def test_ramification_guards(Q12):
    with pytest.raises(DatumError):
        RamificationIndices(())
    with pytest.raises(DatumError):
        RamificationIndices((Q12.one, Q12.zero))


@pytest.mark.parametrize("seed", range(8))
def test_random_data_are_valid(seed, Q12):
    pd = random_datum(Q12, seed, max_dim=4)
    assert validate(pd).passed
    assert monodromy_commutation(pd.side) and monodromy_commutation(pd.side_star)
    assert data_equal(dualize(dualize(pd)), pd)
