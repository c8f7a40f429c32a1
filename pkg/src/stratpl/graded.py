"""Graded vector spaces, degree-shifting maps and degree-complementary pairings.

A :class:`GradedSpace` is a finite map degree -> tuple of basis labels. Maps and
pairings store one dense :class:`~stratpl.linalg.Matrix` per degree; missing
blocks are zero.
"""
from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .linalg import Matrix, ShapeError
from .scalars import Scalar


class GradedSpace:
    __slots__ = ("field", "basis")

    def __init__(self, field, basis: Mapping[int, Sequence[str]] | None = None):
        self.field = field
        clean = {}
        for d, labels in (basis or {}).items():
            labels = tuple(labels)
            if not labels:
                continue
            if len(set(labels)) != len(labels):
                raise ValueError(f"duplicate basis labels in degree {d}: {labels}")
            clean[int(d)] = labels
        self.basis = dict(sorted(clean.items()))

    @classmethod
    def zero(cls, field) -> "GradedSpace":
        return cls(field, {})

    @classmethod
    def from_dims(cls, field, dims: Mapping[int, int], prefix: str = "e") -> "GradedSpace":
        return cls(field, {d: [f"{prefix}{d}_{k}" for k in range(n)] for d, n in dims.items()})

    def dim(self, d: int) -> int:
        return len(self.basis.get(d, ()))

    def labels(self, d: int) -> tuple[str, ...]:
        return self.basis.get(d, ())

    @property
    def degrees(self) -> list[int]:
        return list(self.basis)

    @property
    def dims(self) -> dict[int, int]:
        return {d: len(v) for d, v in self.basis.items()}

    def total_dim(self) -> int:
        return sum(len(v) for v in self.basis.values())

    def is_zero(self) -> bool:
        return not self.basis

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(v) for d, v in self.basis.items())

    def relabel(self, fn) -> "GradedSpace":
        return GradedSpace(self.field, {d: [fn(d, lab) for lab in v] for d, v in self.basis.items()})

    def same_shape(self, other: "GradedSpace") -> bool:
        return self.dims == other.dims

    def __eq__(self, other):
        if not isinstance(other, GradedSpace):
            return NotImplemented
        return self.field == other.field and self.basis == other.basis

    __hash__ = None

    def __repr__(self):
        return f"GradedSpace({self.dims})"


class GradedMap:
    """A linear map raising degree by ``shift``; ``blocks[i]`` maps degree i to i + shift."""

    __slots__ = ("source", "target", "shift", "blocks")

    def __init__(self, source: GradedSpace, target: GradedSpace, shift: int = 0,
                 blocks: Mapping[int, Matrix] | None = None):
        self.source = source
        self.target = target
        self.shift = shift
        clean = {}
        for i, m in (blocks or {}).items():
            want = (target.dim(i + shift), source.dim(i))
            if m.shape != want:
                raise ShapeError(f"block in degree {i} has shape {m.shape}, expected {want}")
            if want[0] and want[1] and not m.is_zero():
                clean[i] = m
        self.blocks = dict(sorted(clean.items()))

    @property
    def field(self):
        return self.source.field

    def block(self, i: int) -> Matrix:
        m = self.blocks.get(i)
        if m is None:
            return Matrix.zeros(self.field, self.target.dim(i + self.shift), self.source.dim(i))
        return m

    @classmethod
    def identity(cls, space: GradedSpace) -> "GradedMap":
        return cls(space, space, 0, {d: Matrix.identity(space.field, n) for d, n in space.dims.items()})

    @classmethod
    def zero(cls, source: GradedSpace, target: GradedSpace, shift: int = 0) -> "GradedMap":
        return cls(source, target, shift, {})

    def degrees(self) -> list[int]:
        return sorted(set(self.source.degrees) | {d - self.shift for d in self.target.degrees})

    def rank(self, i: int | None = None) -> int:
        if i is not None:
            return self.block(i).rank()
        return sum(m.rank() for m in self.blocks.values())

    def __call__(self, i: int, v: Sequence[Scalar]) -> list[Scalar]:
        return self.block(i).apply(v)

    def scale(self, c) -> "GradedMap":
        return GradedMap(self.source, self.target, self.shift,
                         {i: m.scale(c) for i, m in self.blocks.items()})

    def __neg__(self) -> "GradedMap":
        return self.scale(-1)

    def __add__(self, other: "GradedMap") -> "GradedMap":
        return linear_combine([(1, self), (1, other)])

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        return linear_combine([(1, self), (-1, other)])

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        return compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        if (self.source != other.source or self.target != other.target
                or self.shift != other.shift):
            return False
        return all(self.block(i) == other.block(i) for i in set(self.blocks) | set(other.blocks))

    __hash__ = None

    def matrices_equal(self, other: "GradedMap") -> bool:
        """Blockwise equality ignoring basis labels (dimensions must agree)."""
        if self.shift != other.shift:
            return False
        if not (self.source.same_shape(other.source) and self.target.same_shape(other.target)):
            return False
        return all(self.block(i) == other.block(i) for i in set(self.blocks) | set(other.blocks))

    def __repr__(self):
        return f"GradedMap({self.source.dims} -> {self.target.dims}, shift={self.shift})"


class GradedPairing:
    """Bilinear pairing of ``left`` degree i with ``right`` degree 2*level - i.

    ``blocks[i]`` has shape dim(left, i) x dim(right, 2*level - i) and
    evaluates as ``x^T P y``.
    """

    __slots__ = ("left", "right", "level", "blocks")

    def __init__(self, left: GradedSpace, right: GradedSpace, level: int,
                 blocks: Mapping[int, Matrix] | None = None):
        self.left = left
        self.right = right
        self.level = level
        clean = {}
        for i, m in (blocks or {}).items():
            want = (left.dim(i), right.dim(2 * level - i))
            if m.shape != want:
                raise ShapeError(f"pairing block in degree {i} has shape {m.shape}, expected {want}")
            if want[0] and want[1] and not m.is_zero():
                clean[i] = m
        self.blocks = dict(sorted(clean.items()))

    @property
    def field(self):
        return self.left.field

    def partner(self, i: int) -> int:
        return 2 * self.level - i

    def block(self, i: int) -> Matrix:
        m = self.blocks.get(i)
        if m is None:
            return Matrix.zeros(self.field, self.left.dim(i), self.right.dim(self.partner(i)))
        return m

    def degrees(self) -> list[int]:
        return sorted(set(self.left.degrees) | {self.partner(j) for j in self.right.degrees})

    def evaluate(self, i: int, x: Sequence[Scalar], y: Sequence[Scalar]) -> Scalar:
        py = self.block(i).apply(y)
        acc = self.field.zero
        for a, b in zip(x, py):
            acc = acc + a * b
        return acc

    def scale(self, c) -> "GradedPairing":
        return GradedPairing(self.left, self.right, self.level,
                             {i: m.scale(c) for i, m in self.blocks.items()})

    def __eq__(self, other):
        if not isinstance(other, GradedPairing):
            return NotImplemented
        if self.left != other.left or self.right != other.right or self.level != other.level:
            return False
        return all(self.block(i) == other.block(i) for i in set(self.blocks) | set(other.blocks))

    __hash__ = None

    def matrices_equal(self, other: "GradedPairing") -> bool:
        if not (self.left.same_shape(other.left) and self.right.same_shape(other.right)):
            return False
        return all(self.block(i) == other.block(i) for i in set(self.blocks) | set(other.blocks))

    def __repr__(self):
        return f"GradedPairing({self.left.dims} x {self.right.dims}, level={self.level})"


def compose(g: GradedMap, f: GradedMap) -> GradedMap:
    """g after f."""
    if f.target != g.source:
        raise ShapeError(f"cannot compose: {f.target!r} is not {g.source!r}")
    blocks = {}
    for i in f.source.degrees:
        j = i + f.shift
        if g.source.dim(j) == 0 or g.target.dim(j + g.shift) == 0:
            continue
        blocks[i] = g.block(j) @ f.block(i)
    return GradedMap(f.source, g.target, f.shift + g.shift, blocks)


def linear_combine(terms: Iterable[tuple[object, GradedMap]]) -> GradedMap:
    terms = list(terms)
    if not terms:
        raise ValueError("linear_combine needs at least one term")
    first = terms[0][1]
    for _, m in terms[1:]:
        if m.source != first.source or m.target != first.target or m.shift != first.shift:
            raise ShapeError("linear_combine: maps do not share source, target and shift")
    blocks = {}
    for i in first.source.degrees:
        acc = None
        for c, m in terms:
            b = m.block(i).scale(c)
            acc = b if acc is None else acc + b
        blocks[i] = acc
    return GradedMap(first.source, first.target, first.shift, blocks)


def is_isomorphism(f: GradedMap) -> bool:
    shifted = {d + f.shift for d in f.source.degrees}
    if shifted != set(f.target.degrees):
        return False
    return all(f.block(i).is_invertible() for i in f.source.degrees)


def is_injective(f: GradedMap) -> bool:
    return all(f.block(i).rank() == f.source.dim(i) for i in f.source.degrees)


def check_nondegenerate(p: GradedPairing) -> bool:
    for i in p.degrees():
        b = p.block(i)
        if b.rows != b.cols or b.rank() != b.rows:
            return False
    return True


def pairing_ranks(p: GradedPairing) -> dict[int, int]:
    return {i: p.block(i).rank() for i in p.degrees()}


def adjoint_identity_check(f: GradedMap, g: GradedMap, p: GradedPairing, q: GradedPairing) -> bool:
    """True iff q(f x, y) == p(x, g y) for all homogeneous x, y.

    f: left(p) -> left(q), g: right(q) -> right(p).
    """
    if f.source != p.left or f.target != q.left or g.source != q.right or g.target != p.right:
        raise ShapeError("adjoint_identity_check: maps do not match the pairings")
    if 2 * q.level - f.shift + g.shift != 2 * p.level:
        raise ShapeError("adjoint_identity_check: degree bookkeeping is inconsistent")
    for i in p.left.degrees:
        j = 2 * q.level - (i + f.shift)
        lhs = f.block(i).T @ q.block(i + f.shift)
        rhs = p.block(i) @ g.block(j)
        if lhs != rhs:
            return False
    return True


def invert(f: GradedMap) -> GradedMap:
    """Inverse of a graded isomorphism; raises ZeroDivisionError if singular."""
    if not is_isomorphism(f):
        raise ZeroDivisionError("graded map is not invertible")
    return GradedMap(f.target, f.source, -f.shift,
                     {i + f.shift: f.block(i).inverse() for i in f.source.degrees})
