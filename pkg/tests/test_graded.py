import pytest

from stratpl.datum import derive_monodromies
from stratpl.graded import (GradedMap, GradedPairing, GradedSpace, ShapeError, adjoint_identity_check,
                            check_nondegenerate, compose, invert, is_injective, is_isomorphism,
                            linear_combine, pairing_ranks)
from stratpl.linalg import Matrix
from stratpl.scalars import parse_mode
from stratpl.stabilize import suspension_step

Q = parse_mode("cyclotomic:1")


def space(dims, prefix="e"):
    return GradedSpace.from_dims(Q, dims, prefix)


def rand_map(src, tgt, shift, seed=1):
    blocks = {}
    k = seed
    for i in src.degrees:
        r, c = tgt.dim(i + shift), src.dim(i)
        data = []
        for _ in range(r):
            data.append([Q.from_int((k := k * 7 % 11) - 5) for _ in range(c)])
        blocks[i] = Matrix(Q, r, c, data)
    return GradedMap(src, tgt, shift, blocks)


def test_identity_law():
    V, W = space({0: 2, 1: 1}), space({0: 1, 1: 3}, "f")
    f = rand_map(V, W, 0)
    assert compose(GradedMap.identity(W), f) == f
    assert compose(f, GradedMap.identity(V)) == f


def test_shifts_add():
    U, V, W = space({0: 1}), space({1: 2}, "f"), space({2: 1}, "g")
    f, g = rand_map(U, V, 1), rand_map(V, W, 1, seed=3)
    h = compose(g, f)
    assert h.shift == 2
    assert h.block(0) == g.block(1) @ f.block(0)


def test_compose_mismatch():
    V, W = space({0: 1}), space({0: 2}, "f")
    with pytest.raises(ShapeError):
        compose(GradedMap.identity(V), GradedMap.identity(W))


def test_compose_recovers_monodromy(classical):
    side = classical[0].side
    mono = derive_monodromies(side)
    assert compose(side.Vartilde, side.Jtilde) == mono.M + (-GradedMap.identity(side.H))
    assert linear_combine([(1, GradedMap.identity(side.Hbar)), (1, compose(side.Jtilde, side.Vartilde))]) == mono.Mbar


def test_linear_combine_trivial():
    V = space({0: 2, 3: 1})
    f = rand_map(V, V, 0)
    z = linear_combine([(1, f), (-1, f)])
    assert z.blocks == {} and z == GradedMap.zero(V, V)
    assert linear_combine([(1, GradedMap.identity(V)), (0, f)]) == GradedMap.identity(V)


def test_isomorphism_trivial():
    V = space({0: 2})
    assert is_isomorphism(GradedMap.identity(V))
    assert not is_isomorphism(GradedMap.zero(V, V))
    assert invert(GradedMap.identity(V)) == GradedMap.identity(V)


def test_suspension_is_isomorphism(classical):
    pd, aux = classical
    sd = suspension_step(pd, aux)
    assert is_isomorphism(sd.injection("Sigma"))
    assert is_injective(sd.injection("inf"))


def test_nondegenerate_trivial():
    V1 = space({1: 1})
    assert check_nondegenerate(GradedPairing(V1, V1, 1, {1: Matrix.from_rows(Q, [[1]])}))
    V2 = space({1: 2})
    p = GradedPairing(V2, V2, 1, {1: Matrix.from_rows(Q, [[1, 0], [0, 0]])})
    assert not check_nondegenerate(p)
    assert pairing_ranks(p) == {1: 1}


def test_oracle_pairings_nondegenerate(classical):
    pd = classical[0]
    for p in pd.pairings().values():
        assert check_nondegenerate(p)
        assert p.block(1).shape == (1, 1)


def test_adjoint_trivial():
    V = space({0: 1, 2: 1})
    P = GradedPairing(V, V, 1, {0: Matrix.from_rows(Q, [[1]]), 2: Matrix.from_rows(Q, [[1]])})
    Id = GradedMap.identity(V)
    assert adjoint_identity_check(Id, Id, P, P)
    assert not adjoint_identity_check(Id.scale(2), Id, P, P)


def test_adjoint_shape_guard():
    V, W = space({0: 1}), space({0: 1}, "f")
    P = GradedPairing(V, V, 0, {0: Matrix.from_rows(Q, [[1]])})
    with pytest.raises(ShapeError):
        adjoint_identity_check(GradedMap.identity(W), GradedMap.identity(V), P, P)


def test_pairing_block_shape_guard():
    V = space({1: 2})
    with pytest.raises(ShapeError):
        GradedPairing(V, V, 1, {1: Matrix.from_rows(Q, [[1]])})
