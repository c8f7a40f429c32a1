"""Dense exact matrices over a :mod:`stratpl.scalars` field."""
from __future__ import annotations

from typing import Iterable, Sequence

from .scalars import Scalar, ScalarError


class ShapeError(ValueError):
    pass


class Matrix:
    """An immutable ``rows x cols`` matrix of Scalars (zero-size shapes allowed)."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field, rows: int, cols: int, data: Sequence[Sequence[Scalar]] | None = None):
        self.field = field
        self.rows = rows
        self.cols = cols
        if data is None:
            z = field.zero
            data = [[z] * cols for _ in range(rows)]
        else:
            data = [list(r) for r in data]
            if len(data) != rows or any(len(r) != cols for r in data):
                raise ShapeError(f"data does not match shape {rows}x{cols}")
        self.data = data

    # construction
    @classmethod
    def zeros(cls, field, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols)

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        m = cls(field, n, n)
        for i in range(n):
            m.data[i][i] = field.one
        return m

    @classmethod
    def from_rows(cls, field, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [[_as_scalar(field, x) for x in r] for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(field, len(rows), cols, rows)

    @classmethod
    def diag(cls, field, entries: Sequence) -> "Matrix":
        m = cls(field, len(entries), len(entries))
        for i, x in enumerate(entries):
            m.data[i][i] = _as_scalar(field, x)
        return m

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        return self.data[i][j]

    def row(self, i: int) -> list[Scalar]:
        return list(self.data[i])

    def col(self, j: int) -> list[Scalar]:
        return [r[j] for r in self.data]

    def copy_data(self) -> list[list[Scalar]]:
        return [list(r) for r in self.data]

    # arithmetic
    def _check_same(self, other: "Matrix"):
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")
        if other.field != self.field:
            raise ScalarError("mode mismatch between matrices")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix(self.field, self.rows, self.cols,
                      [[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix(self.field, self.rows, self.cols,
                      [[a - b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, self.rows, self.cols, [[-a for a in r] for r in self.data])

    def scale(self, c) -> "Matrix":
        c = _as_scalar(self.field, c)
        return Matrix(self.field, self.rows, self.cols, [[c * a for a in r] for r in self.data])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        zero = self.field.zero
        cols = other.col_lists()
        out = []
        for r in self.data:
            nz = [(k, a) for k, a in enumerate(r) if not a.is_zero()]
            row = []
            for c in cols:
                acc = zero
                for k, a in nz:
                    b = c[k]
                    if not b.is_zero():
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Matrix(self.field, self.rows, other.cols, out)

    def col_lists(self) -> list[list[Scalar]]:
        return [[r[j] for r in self.data] for j in range(self.cols)]

    def apply(self, v: Sequence[Scalar]) -> list[Scalar]:
        if len(v) != self.cols:
            raise ShapeError(f"vector of length {len(v)} for {self.shape} matrix")
        zero = self.field.zero
        out = []
        for r in self.data:
            acc = zero
            for a, b in zip(r, v):
                if not a.is_zero() and not b.is_zero():
                    acc = acc + a * b
            out.append(acc)
        return out

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows, self.col_lists())

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape or self.field != other.field:
            return False
        return all(a == b for r, s in zip(self.data, other.data) for a, b in zip(r, s))

    __hash__ = None

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.data for a in r)

    def __repr__(self):
        body = "; ".join(", ".join(str(a) for a in r) for r in self.data)
        return f"Matrix[{self.rows}x{self.cols}]({body})"

    # block assembly
    @staticmethod
    def block(field, blocks: Sequence[Sequence["Matrix"]]) -> "Matrix":
        """Assemble a block matrix; every block row must share its row count."""
        rows_out = []
        ncols = None
        for brow in blocks:
            h = brow[0].rows if brow else 0
            width = sum(b.cols for b in brow)
            if ncols is None:
                ncols = width
            elif width != ncols:
                raise ShapeError("block rows have different widths")
            for b in brow:
                if b.rows != h:
                    raise ShapeError("blocks in a row have different heights")
            for i in range(h):
                rows_out.append([x for b in brow for x in b.data[i]])
        return Matrix(field, len(rows_out), ncols or 0, rows_out)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "Matrix":
        rows = list(rows)
        cols = list(cols)
        return Matrix(self.field, len(rows), len(cols), [[self.data[i][j] for j in cols] for i in rows])

    # elimination
    def rank(self) -> int:
        """Rank by fraction-free (Bareiss) elimination."""
        a = self.copy_data()
        nrows, ncols = self.rows, self.cols
        one = self.field.one
        prev = one
        r = 0
        for c in range(ncols):
            piv = next((i for i in range(r, nrows) if not a[i][c].is_zero()), None)
            if piv is None:
                continue
            a[r], a[piv] = a[piv], a[r]
            p = a[r][c]
            for i in range(r + 1, nrows):
                f = a[i][c]
                row_i = a[i]
                row_r = a[r]
                for j in range(c + 1, ncols):
                    row_i[j] = (p * row_i[j] - f * row_r[j]) / prev
                row_i[c] = self.field.zero
            prev = p
            r += 1
            if r == nrows:
                break
        return r

    def det(self) -> Scalar:
        if self.rows != self.cols:
            raise ShapeError("determinant of a non-square matrix")
        n = self.rows
        a = self.copy_data()
        one = self.field.one
        prev = one
        sign = 1
        for k in range(n):
            piv = next((i for i in range(k, n) if not a[i][k].is_zero()), None)
            if piv is None:
                return self.field.zero
            if piv != k:
                a[k], a[piv] = a[piv], a[k]
                sign = -sign
            p = a[k][k]
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (p * a[i][j] - a[i][k] * a[k][j]) / prev
            prev = p
        d = a[n - 1][n - 1] if n else one
        return d if sign > 0 else -d

    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form and pivot columns."""
        a = self.copy_data()
        pivots = []
        r = 0
        for c in range(self.cols):
            piv = next((i for i in range(r, self.rows) if not a[i][c].is_zero()), None)
            if piv is None:
                continue
            a[r], a[piv] = a[piv], a[r]
            inv = a[r][c].inverse()
            a[r] = [x * inv for x in a[r]]
            for i in range(self.rows):
                if i != r and not a[i][c].is_zero():
                    f = a[i][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return Matrix(self.field, self.rows, self.cols, a), pivots

    def nullspace(self) -> list[list[Scalar]]:
        """Basis of {v : A v = 0}, one free variable per vector."""
        red, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        zero, one = self.field.zero, self.field.one
        basis = []
        for f in free:
            v = [zero] * self.cols
            v[f] = one
            for i, p in enumerate(pivots):
                v[p] = -red.data[i][f]
            basis.append(v)
        return basis

    def solve(self, b: Sequence[Scalar]) -> list[Scalar] | None:
        """One solution of A x = b, or None when inconsistent."""
        if len(b) != self.rows:
            raise ShapeError("right-hand side length mismatch")
        aug = Matrix(self.field, self.rows, self.cols + 1,
                     [r + [x] for r, x in zip(self.copy_data(), b)])
        red, pivots = aug.rref()
        if self.cols in pivots:
            return None
        x = [self.field.zero] * self.cols
        for i, p in enumerate(pivots):
            x[p] = red.data[i][self.cols]
        return x

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ShapeError("inverse of a non-square matrix")
        n = self.rows
        if n == 0:
            return Matrix(self.field, 0, 0)
        aug = Matrix.block(self.field, [[self, Matrix.identity(self.field, n)]])
        red, pivots = aug.rref()
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return red.submatrix(range(n), range(n, 2 * n))

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows


def _as_scalar(field, x) -> Scalar:
    if isinstance(x, Scalar):
        if x.field != field:
            raise ScalarError(f"mode mismatch: {x.field.mode} vs {field.mode}")
        return x
    return field.from_int(x)
