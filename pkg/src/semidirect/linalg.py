"""Exact rational vectors, matrices and linear systems.

Scalars are :class:`fractions.Fraction`; nothing here ever touches a float.
Vectors are plain tuples of Fractions.  :class:`Matrix` is immutable.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

Scalar = Fraction
Vector = tuple

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class LinAlgError(ValueError):
    pass


class DimensionMismatch(LinAlgError):
    pass


class SingularMatrix(LinAlgError):
    pass


def parse_rational(text: str) -> Fraction:
    """Parse ``p`` or ``p/q``.  Decimal and exponent literals are rejected."""
    text = text.strip()
    if not _RATIONAL.match(text):
        raise ValueError(f"not a rational literal: {text!r}")
    value = Fraction(text)
    return value


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def as_scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating-point values are not accepted; use Fraction or int")
    if isinstance(x, str):
        return parse_rational(x)
    return Fraction(x)


def vector(values: Iterable) -> Vector:
    return tuple(as_scalar(v) for v in values)


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(Fraction(1 if k == i else 0) for k in range(n))


def vadd(u: Vector, v: Vector) -> Vector:
    if len(u) != len(v):
        raise DimensionMismatch(f"vector lengths {len(u)} and {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vector, v: Vector) -> Vector:
    if len(u) != len(v):
        raise DimensionMismatch(f"vector lengths {len(u)} and {len(v)}")
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v: Vector) -> Vector:
    c = as_scalar(c)
    return tuple(c * a for a in v)


def vneg(v: Vector) -> Vector:
    return tuple(-a for a in v)


def is_zero_vector(v: Vector) -> bool:
    return all(a == 0 for a in v)


def dot(u: Vector, v: Vector) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def lincomb(coeffs: Sequence, vectors: Sequence[Vector], n: int) -> Vector:
    out = [Fraction(0)] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for k, a in enumerate(v):
                if a:
                    out[k] += c * a
    return tuple(out)


class Matrix:
    """Immutable dense matrix over the rationals."""

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, entries: Sequence[Sequence], rows: int | None = None, cols: int | None = None):
        e = tuple(tuple(as_scalar(x) for x in row) for row in entries)
        r = len(e) if rows is None else rows
        if len(e) != r:
            raise DimensionMismatch(f"expected {r} rows, got {len(e)}")
        c = (len(e[0]) if e else 0) if cols is None else cols
        for row in e:
            if len(row) != c:
                raise DimensionMismatch("ragged matrix rows")
        self.rows = r
        self.cols = c
        self._e = e

    # -- constructors -------------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "Matrix":
        if not columns:
            return cls([[] for _ in range(rows or 0)], rows or 0, 0)
        r = len(columns[0])
        return cls([[col[i] for col in columns] for i in range(r)], r, len(columns))

    @classmethod
    def blocks(cls, grid: Sequence[Sequence["Matrix"]]) -> "Matrix":
        rows = []
        for block_row in grid:
            height = block_row[0].rows
            if any(b.rows != height for b in block_row):
                raise DimensionMismatch("block heights differ within a block row")
            for i in range(height):
                rows.append([x for b in block_row for x in b._e[i]])
        width = sum(b.cols for b in grid[0]) if grid else 0
        return cls(rows, len(rows), width)

    # -- access ---------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> tuple:
        return self._e

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self._e[i][j]

    def row(self, i: int) -> Vector:
        return self._e[i]

    def col(self, j: int) -> Vector:
        return tuple(row[j] for row in self._e)

    def columns(self) -> list[Vector]:
        return [self.col(j) for j in range(self.cols)]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._wrap(tuple(tuple(self._e[i][j] for j in cols) for i in rows), len(rows), len(cols))

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self._e]

    @classmethod
    def _wrap(cls, entries: tuple, rows: int, cols: int) -> "Matrix":
        """Adopt a tuple of Fraction tuples without revalidating it."""
        M = cls.__new__(cls)
        M.rows, M.cols, M._e = rows, cols, entries
        return M

    # -- arithmetic ---------------------------------------------------------
    def __matmul__(self, other):
        if isinstance(other, Matrix):
            return matmul(self, other)
        v = tuple(other)
        if len(v) != self.cols:
            raise DimensionMismatch(f"{self.rows}x{self.cols} matrix applied to length-{len(v)} vector")
        nz = [(k, b) for k, b in enumerate(v) if b]
        zero = Fraction(0)
        return tuple(sum((row[k] * b for k, b in nz if row[k]), zero) for row in self._e)

    def apply(self, v: Sequence) -> Vector:
        return self @ v

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return Matrix._wrap(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._e, other._e)), self.rows,
                            self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        return Matrix._wrap(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._e, other._e)), self.rows,
                            self.cols)

    def __neg__(self) -> "Matrix":
        return Matrix._wrap(tuple(tuple(-a for a in r) for r in self._e), self.rows, self.cols)

    def __mul__(self, c) -> "Matrix":
        c = as_scalar(c)
        return Matrix([[c * a for a in r] for r in self._e], self.rows, self.cols)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.shape == other.shape and self._e == other._e

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._e))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in r) for r in self._e)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"

    @property
    def T(self) -> "Matrix":
        return Matrix._wrap(tuple(zip(*self._e)) if self.rows else ((),) * self.cols, self.cols, self.rows)

    def transpose(self) -> "Matrix":
        return self.T

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(a == 0 for r in self._e for a in r)

    def trace(self) -> Fraction:
        if not self.is_square:
            raise DimensionMismatch("trace of a non-square matrix")
        return sum((self._e[i][i] for i in range(self.rows)), Fraction(0))

    def inverse(self) -> "Matrix":
        return inverse(self)

    def det(self) -> Fraction:
        return determinant(self)

    def rank(self) -> int:
        return rank(self)

    def kernel(self) -> list[Vector]:
        return kernel_basis(self)


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if A.cols != B.rows:
        raise DimensionMismatch(f"cannot multiply {A.rows}x{A.cols} by {B.rows}x{B.cols}")
    Bt = B.T._e
    zero = Fraction(0)
    out = []
    for row in A._e:
        nz = [(k, a) for k, a in enumerate(row) if a]
        out.append(tuple(sum((a * col[k] for k, a in nz if col[k]), zero) for col in Bt))
    return Matrix._wrap(tuple(out), A.rows, B.cols)


def commutator(A: Matrix, B: Matrix) -> Matrix:
    return A @ B - B @ A


def rref(A: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; pivots chosen as the first nonzero entry in column order."""
    m = [list(r) for r in A.entries]
    pivots: list[int] = []
    r = 0
    for c in range(A.cols):
        if r == A.rows:
            break
        p = next((i for i in range(r, A.rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(A.rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(A: Matrix) -> int:
    return len(rref(A)[1])


def kernel_basis(A: Matrix) -> list[Vector]:
    """Basis of {v : A v = 0}, one vector per free column in increasing order."""
    m, pivots = rref(A)
    free = [c for c in range(A.cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * A.cols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -m[r][f]
        basis.append(tuple(v))
    return basis


def determinant(A: Matrix) -> Fraction:
    if not A.is_square:
        raise DimensionMismatch(f"determinant of a {A.rows}x{A.cols} matrix")
    m = [list(r) for r in A.entries]
    n = A.rows
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def inverse(A: Matrix) -> Matrix:
    if not A.is_square:
        raise DimensionMismatch(f"inverse of a {A.rows}x{A.cols} matrix")
    n = A.rows
    aug = Matrix.blocks([[A, Matrix.identity(n)]])
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular (determinant 0)")
    return Matrix([row[n:] for row in m], n, n)


def span_basis(vectors: Iterable[Vector], n: int) -> list[Vector]:
    """Reduced echelon basis of the span of ``vectors`` in Q^n."""
    vs = [tuple(v) for v in vectors]
    if not vs:
        return []
    m, pivots = rref(Matrix(vs, len(vs), n))
    return [tuple(m[r]) for r in range(len(pivots))]


def in_span(v: Vector, basis: Sequence[Vector]) -> bool:
    n = len(v)
    if not basis:
        return is_zero_vector(v)
    return rank(Matrix(list(basis), len(basis), n)) == rank(Matrix(list(basis) + [tuple(v)], len(basis) + 1, n))


class LinearSystem:
    """Sparse exact linear system ``sum_j a_ij x_j = b_i``, reduced incrementally.

    Rows are dicts ``{column: coefficient}``.  Elimination keeps one row per pivot column,
    normalized so the pivot (its smallest column) is 1; back substitution into reduced form
    is deferred until a solution is requested.
    """

    def __init__(self, nvars: int):
        self.nvars = nvars
        self._pivots: dict[int, tuple[dict[int, Fraction], Fraction]] = {}
        self._reduced = True
        self.inconsistent = False
        self.witness: tuple[dict, Fraction] | None = None

    def add(self, coeffs: dict[int, Fraction], rhs=0) -> None:
        row = {c: as_scalar(a) for c, a in coeffs.items() if a != 0}
        b = as_scalar(rhs)
        original = (dict(row), b)
        pivots = self._pivots
        while row:
            # pivot rows only contain columns beyond their pivot, so this terminates
            hits = [c for c in row if c in pivots]
            if not hits:
                break
            c = min(hits)
            f = row.pop(c)
            prow, pb = pivots[c]
            for k, a in prow.items():
                if k == c:
                    continue
                val = row.get(k, 0) - f * a
                if val:
                    row[k] = val
                else:
                    row.pop(k, None)
            b -= f * pb
        if not row:
            if b != 0 and not self.inconsistent:
                self.inconsistent = True
                self.witness = original
            return
        p = min(row)
        inv = 1 / row[p]
        pivots[p] = ({k: a * inv for k, a in row.items()}, b * inv)
        self._reduced = False

    def _reduce(self) -> None:
        """Clear every pivot column from the other rows, last pivot first."""
        if self._reduced:
            return
        order = sorted(self._pivots)
        for p in reversed(order):
            row, b = self._pivots[p]
            for q in order:
                if q >= p:
                    break
                qrow, qb = self._pivots[q]
                f = qrow.get(p)
                if f:
                    for k, a in row.items():
                        val = qrow.get(k, 0) - f * a
                        if val:
                            qrow[k] = val
                        else:
                            qrow.pop(k, None)
                    self._pivots[q] = (qrow, qb - f * b)
        self._reduced = True

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def feasible(self) -> bool:
        return not self.inconsistent

    @property
    def unique(self) -> bool:
        return self.feasible and self.rank == self.nvars

    def particular_solution(self) -> Vector | None:
        """A solution with every free variable set to zero, or None when inconsistent."""
        if self.inconsistent:
            return None
        self._reduce()
        x = [Fraction(0)] * self.nvars
        for c, (_, b) in self._pivots.items():
            x[c] = b
        return tuple(x)

    def free_columns(self) -> list[int]:
        return [c for c in range(self.nvars) if c not in self._pivots]

    def homogeneous_basis(self) -> list[Vector]:
        """Basis of the solution space of the homogeneous system, one vector per free column."""
        self._reduce()
        basis = []
        for f in self.free_columns():
            x = [Fraction(0)] * self.nvars
            x[f] = Fraction(1)
            for c, (prow, _) in self._pivots.items():
                a = prow.get(f)
                if a:
                    x[c] = -a
            basis.append(tuple(x))
        return basis
