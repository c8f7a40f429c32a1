from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from stratpl.scalars import (ScalarError, ScalarZeroDivision, arith, invert_indices, parse_mode,
                             root_of_unity)


def test_i_squared():
    i = root_of_unity(1, 4)
    assert arith(i, i, "mul") == -1


def test_symbolic_division(Qst):
    t = Qst.gen("t")
    one = Qst.one
    assert arith(t, one - t, "div") == Qst.parse("t/(1-t)")


def test_symbolic_product(Qst):
    t = Qst.gen("t")
    assert (1 - t) * (1 + t) == 1 - t * t


@pytest.mark.parametrize("k, expect", [(0, 1), (6, -1)])
def test_roots_trivial(k, expect):
    assert root_of_unity(k, 12) == expect


def test_primitive_cube_root():
    x = root_of_unity(4, 12)
    assert x * x + x + 1 == 0
    assert x != 1


def test_root_index_range():
    with pytest.raises(ScalarError):
        root_of_unity(12, 12)


def test_invert_indices():
    z3 = root_of_unity(1, 3)
    m1 = z3.field.from_int(-1)
    assert invert_indices([z3, m1]) == [z3 * z3, m1]
    one = z3.field.one
    assert invert_indices([one, one]) == [one, one]


def test_invert_indices_symbolic(Qst):
    t, s = Qst.gen("t"), Qst.gen("s")
    assert invert_indices([t, s]) == [1 / t, 1 / s]


def test_invert_zero_index(Q12):
    with pytest.raises(ScalarZeroDivision):
        invert_indices([Q12.zero])


def test_mode_mismatch(Q12, Qst):
    with pytest.raises(ScalarError, match="mode mismatch"):
        arith(Q12.one, Qst.one, "add")


def test_division_by_zero(Q12, Qst):
    with pytest.raises(ZeroDivisionError):
        Q12.one / Q12.zero
    with pytest.raises(ZeroDivisionError):
        Qst.gen("s") / Qst.zero


@pytest.mark.parametrize("mode", ["cyclotomic:x", "padic:5", "cyclotomic:0"])
def test_bad_modes(mode):
    with pytest.raises(ScalarError):
        parse_mode(mode)


def test_format_round_trip(Q12, Qst):
    z = Q12.zeta(5)
    for x in (z, z * z - Fraction(3, 7), Q12.zero, Q12.one):
        assert Q12.parse(str(x)) == x
    s, t = Qst.gen("s"), Qst.gen("t")
    for x in (s * t, (1 - s) / (1 + t * t), Qst.zero):
        assert Qst.parse(str(x)) == x


def test_malformed_strings(Q12, Qst):
    with pytest.raises(ScalarError):
        Q12.parse("1 + q")
    with pytest.raises(ScalarError):
        Qst.parse("s + w")


def test_gcd_normalized(Qst):
    s = Qst.gen("s")
    assert str((s * s - 1) / (s - 1)) == str(s + 1)


coeffs = st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=9), min_size=1, max_size=6)


@settings(max_examples=60, deadline=None)
@given(coeffs, coeffs, coeffs)
def test_cyclotomic_field_axioms(a, b, c):
    F = parse_mode("cyclotomic:12")
    x, y, z = F.from_coeffs(a), F.from_coeffs(b), F.from_coeffs(c)
    assert (x + y) * z == x * z + y * z
    assert x * y == y * x
    if not y.is_zero():
        assert (x / y) * y == x


@settings(max_examples=30, deadline=None)
@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(1, 3))
def test_symbolic_inverse(a, b, k):
    F = parse_mode("symbolic:2")
    s, t = F.gens
    x = a + b * s + t ** k
    assert x * x.inverse() == 1
