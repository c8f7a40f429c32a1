"""Exact coefficient fields.

Two modes are supported:

* ``Cyclotomic(N)``: the N-th cyclotomic field Q(z), elements stored as
  integer coordinates in the power basis 1, z, ..., z^(phi(N)-1) over a
  common denominator.
* ``Symbolic(names)``: the rational function field Q(t1, ..., tn), backed by
  sympy's sparse fraction field (numerator/denominator kept gcd-reduced).

Every value is wrapped in :class:`Scalar`, an immutable pair (field, payload)
supporting the usual arithmetic operators.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Sequence

import sympy
from sympy.polys.domains import QQ
from sympy.polys.fields import field as sympy_field


class ScalarError(ValueError):
    """Mode mismatch, malformed scalar string or other misuse."""


class ScalarZeroDivision(ScalarError, ZeroDivisionError):
    pass


# --- dense polynomial helpers over Q (lists of Fraction, low degree first) ---

def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _pmul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] += x * y
    return _trim(out)


def _psub(a: Sequence[Fraction], b: Sequence[Fraction]) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim([Fraction(c) for c in out])


def _pdivmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[list, list]:
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ScalarZeroDivision("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, y in enumerate(b):
            a[i + shift] -= c * y
        _trim(a)
    return _trim(q), a


@lru_cache(maxsize=None)
def _cyclotomic_coeffs(n: int) -> tuple[Fraction, ...]:
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.cyclotomic_poly(n, x), x)
    return tuple(Fraction(int(c)) for c in reversed(poly.all_coeffs()))


# --- fields ---

class Cyclotomic:
    """The cyclotomic field Q(zeta_N).

    Payloads are canonical pairs ``(nums, den)``: integer coordinates in the
    power basis over one positive common denominator, gcd-reduced. The
    modulus is monic with integer coefficients, so products reduce with an
    integer table and equality is tuple equality.
    """

    def __init__(self, n: int):
        n = int(n)
        if n < 1:
            raise ScalarError(f"cyclotomic order must be positive, got {n}")
        self.n = n
        self.modulus = list(_cyclotomic_coeffs(n))
        self.degree = d = len(self.modulus) - 1
        # z^k in the power basis for k < 2d - 1
        table = []
        cur = [0] * d
        cur[0] = 1
        for _ in range(2 * d - 1):
            table.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [c - top * int(m) for c, m in zip(cur, self.modulus)]
        self._table = table
        self.zero = Scalar(self, ((0,) * d, 1))
        self.one = self.from_int(1)

    @property
    def mode(self) -> str:
        return f"cyclotomic:{self.n}"

    def __eq__(self, other):
        return isinstance(other, Cyclotomic) and other.n == self.n

    def __hash__(self):
        return hash(("cyclotomic", self.n))

    def __repr__(self):
        return f"Cyclotomic({self.n})"

    @staticmethod
    def _norm(nums, den) -> tuple:
        if den < 0:
            nums, den = [-x for x in nums], -den
        g = gcd(den, *nums)
        if g != 1:
            nums, den = [x // g for x in nums], den // g
        return tuple(nums), den

    def _reduce(self, coeffs: Sequence[Fraction]) -> tuple:
        """Payload of sum coeffs[k] z^k (any length)."""
        fr = [Fraction(c) for c in coeffs]
        den = lcm(1, *(c.denominator for c in fr))
        ints = [c.numerator * (den // c.denominator) for c in fr]
        return self._norm(self._fold(ints), den)

    def _fold(self, ints: Sequence[int]) -> list:
        d = self.degree
        out = list(ints[:d]) + [0] * max(d - len(ints), 0)
        for k in range(d, len(ints)):
            c = ints[k]
            if c:
                row = self._table[k] if k < len(self._table) else self._power(k)
                for i, x in enumerate(row):
                    if x:
                        out[i] += c * x
        return out

    def _power(self, k: int) -> tuple:
        v = [0] * k + [1]
        _, r = _pdivmod([Fraction(x) for x in v], self.modulus)
        return tuple(int(x) for x in r) + (0,) * (self.degree - len(r))

    def from_int(self, k) -> "Scalar":
        k = Fraction(k)
        nums = [0] * self.degree
        nums[0] = k.numerator
        return Scalar(self, (tuple(nums), k.denominator))

    def from_coeffs(self, coeffs: Iterable) -> "Scalar":
        return Scalar(self, self._reduce(list(coeffs)))

    def zeta(self, k: int) -> "Scalar":
        """zeta_N^k for any integer k."""
        k %= self.n
        return Scalar(self, self._reduce([0] * k + [1]))

    def root_of_unity(self, k: int) -> "Scalar":
        if not 0 <= k < self.n:
            raise ScalarError(f"root index {k} out of range [0, {self.n})")
        return self.zeta(k)

    def coeffs(self, a) -> tuple[Fraction, ...]:
        nums, den = a
        return tuple(Fraction(x, den) for x in nums)

    def _add(self, a, b):
        (x, dx), (y, dy) = a, b
        if dx == dy:
            return self._norm([p + q for p, q in zip(x, y)], dx)
        return self._norm([p * dy + q * dx for p, q in zip(x, y)], dx * dy)

    def _sub(self, a, b):
        return self._add(a, self._neg(b))

    def _neg(self, a):
        return tuple(-x for x in a[0]), a[1]

    def _mul(self, a, b):
        (x, dx), (y, dy) = a, b
        if not any(x[1:]):
            c = x[0]
            return self._norm([c * q for q in y], dx * dy)
        if not any(y[1:]):
            c = y[0]
            return self._norm([c * p for p in x], dx * dy)
        conv = [0] * (2 * len(x) - 1)
        for i, p in enumerate(x):
            if p:
                for j, q in enumerate(y):
                    if q:
                        conv[i + j] += p * q
        return self._norm(self._fold(conv), dx * dy)

    def _is_zero(self, a):
        return not any(a[0])

    def _eq(self, a, b):
        return a == b

    def _inv(self, a):
        if self._is_zero(a):
            raise ScalarZeroDivision("division by zero in cyclotomic field")
        nums, den = a
        if not any(nums[1:]):
            return self._norm([den] + [0] * (self.degree - 1), nums[0])
        # extended Euclid: s*a + t*modulus = g, g a nonzero constant
        r0, r1 = list(self.modulus), _trim(list(self.coeffs(a)))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        c = r1[0]
        return self._reduce([x / c for x in s1])

    def format(self, a) -> str:
        terms = []
        for k, c in enumerate(self.coeffs(a)):
            if c == 0:
                continue
            cs = str(c)
            if k == 0:
                terms.append(cs)
            elif k == 1:
                terms.append(f"{cs}*z")
            else:
                terms.append(f"{cs}*z^{k}")
        return " + ".join(terms) if terms else "0"

    _TERM = re.compile(r"^\s*(-?\d+(?:/\d+)?)(?:\*z(?:\^(\d+))?)?\s*$")

    def parse(self, text: str) -> "Scalar":
        text = text.strip()
        if text == "0":
            return self.zero
        coeffs: dict[int, Fraction] = {}
        for part in text.split(" + "):
            m = self._TERM.match(part)
            if not m:
                raise ScalarError(f"malformed cyclotomic term {part!r} in {text!r}")
            c = Fraction(m.group(1))
            if "*z" in part:
                k = int(m.group(2)) if m.group(2) else 1
            else:
                k = 0
            coeffs[k] = coeffs.get(k, Fraction(0)) + c
        top = max(coeffs) + 1
        return self.from_coeffs([coeffs.get(k, 0) for k in range(top)])


class Symbolic:
    """The rational function field Q(t1, ..., tn) on named symbols."""

    def __init__(self, names: int | Sequence[str] = 1):
        if isinstance(names, int):
            if names < 1:
                raise ScalarError("symbolic mode needs at least one symbol")
            names = [f"t{i + 1}" for i in range(names)]
        names = tuple(str(n) for n in names)
        if not names or len(set(names)) != len(names):
            raise ScalarError(f"bad symbol list {names!r}")
        self.names = names
        self._field, *gens = sympy_field(",".join(names), QQ)
        self._syms = {n: sympy.Symbol(n) for n in names}
        self.zero = Scalar(self, self._field.zero)
        self.one = Scalar(self, self._field.one)
        self.gens = tuple(Scalar(self, g) for g in gens)

    @property
    def nu(self) -> int:
        return len(self.names)

    @property
    def mode(self) -> str:
        return "symbolic:" + ",".join(self.names)

    def __eq__(self, other):
        return isinstance(other, Symbolic) and other.names == self.names

    def __hash__(self):
        return hash(("symbolic", self.names))

    def __repr__(self):
        return f"Symbolic({list(self.names)!r})"

    def gen(self, name: str) -> "Scalar":
        return self.gens[self.names.index(name)]

    def from_int(self, k) -> "Scalar":
        k = Fraction(k)
        return Scalar(self, self._field(sympy.Rational(k.numerator, k.denominator)))

    def _add(self, a, b):
        return a + b

    def _sub(self, a, b):
        return a - b

    def _neg(self, a):
        return -a

    def _mul(self, a, b):
        return a * b

    def _is_zero(self, a):
        return not a

    def _eq(self, a, b):
        return not (a - b)

    def _inv(self, a):
        if not a:
            raise ScalarZeroDivision("division by zero in rational function field")
        return 1 / a

    def format(self, a) -> str:
        return f"({a.numer.as_expr()})/({a.denom.as_expr()})"

    def parse(self, text: str) -> "Scalar":
        try:
            expr = sympy.sympify(text, locals=self._syms)
        except (sympy.SympifyError, SyntaxError, TypeError) as exc:
            raise ScalarError(f"malformed symbolic scalar {text!r}") from exc
        if not expr.free_symbols <= set(self._syms.values()):
            raise ScalarError(f"unknown symbols in {text!r}")
        try:
            return Scalar(self, self._field.from_expr(expr))
        except Exception as exc:  # sympy raises assorted coercion errors
            raise ScalarError(f"cannot coerce {text!r} into {self.mode}") from exc


Field = Cyclotomic | Symbolic


def parse_mode(mode: str) -> Field:
    """Field from a mode string ``cyclotomic:N`` or ``symbolic:n`` / ``symbolic:s,t``."""
    kind, _, arg = mode.partition(":")
    if kind == "cyclotomic":
        try:
            return Cyclotomic(int(arg))
        except ValueError as exc:
            raise ScalarError(f"bad cyclotomic mode {mode!r}") from exc
    if kind == "symbolic":
        if arg.isdigit():
            return Symbolic(int(arg))
        return Symbolic([a for a in arg.split(",") if a])
    raise ScalarError(f"unknown scalar mode {mode!r}")


class Scalar:
    __slots__ = ("field", "value")

    def __init__(self, field, value):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise ScalarError(f"mode mismatch: {self.field.mode} vs {other.field.mode}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.field._add(self.value, o.value))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.field._sub(self.value, o.value))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.field._mul(self.value, o.value))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __neg__(self):
        return Scalar(self.field, self.field._neg(self.value))

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        result = self.field.one
        k = abs(k)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "Scalar":
        return Scalar(self.field, self.field._inv(self.value))

    def is_zero(self) -> bool:
        return self.field._is_zero(self.value)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_int(other)
        if not isinstance(other, Scalar) or other.field != self.field:
            return NotImplemented
        return self.field._eq(self.value, other.value)

    def __hash__(self):
        return hash((self.field, str(self)))

    def __str__(self):
        return self.field.format(self.value)

    def __repr__(self):
        return f"Scalar[{self.field.mode}]({self})"


def arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Field operation by name: ``add``, ``sub``, ``mul`` or ``div``."""
    if not isinstance(a, Scalar) or not isinstance(b, Scalar):
        raise ScalarError("arith expects two Scalars")
    if a.field != b.field:
        raise ScalarError(f"mode mismatch: {a.field.mode} vs {b.field.mode}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ScalarError(f"unknown operation {op!r}")


def root_of_unity(k: int, n: int) -> Scalar:
    return Cyclotomic(n).root_of_unity(k)


def invert_indices(alpha: Sequence[Scalar]) -> list[Scalar]:
    """Entrywise inverse of a list of ramification indices."""
    out = []
    for i, a in enumerate(alpha):
        if a.is_zero():
            raise ScalarZeroDivision(f"ramification index {i} is zero")
        out.append(a.inverse())
    return out
