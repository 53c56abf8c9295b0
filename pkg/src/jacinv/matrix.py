"""Dense matrices over the rationals.

Determinants use Bareiss fraction-free elimination on an integer-scaled copy,
inverses and solves use Gauss-Jordan elimination over ``Fraction``.
"""

from __future__ import annotations

import operator
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .errors import SingularLinearPart


class RationalMatrix:
    __slots__ = ("rows", "cols", "_data", "_scaled")

    def __init__(self, entries: Iterable[Iterable]):
        data = tuple(tuple(Fraction(x) for x in row) for row in entries)
        if not data or not data[0]:
            raise ValueError("matrix must have at least one row and one column")
        width = len(data[0])
        if any(len(row) != width for row in data):
            raise ValueError("ragged matrix rows")
        self.rows = len(data)
        self.cols = width
        self._data = data
        self._scaled = None

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def _wrap(cls, data: tuple[tuple[Fraction, ...], ...]) -> RationalMatrix:
        obj = cls.__new__(cls)
        obj.rows = len(data)
        obj.cols = len(data[0])
        obj._data = data
        obj._scaled = None
        return obj

    def _integer_rows(self) -> tuple[list[list[int]], int]:
        """Integer rows and one common denominator, cached."""
        if self._scaled is None:
            den = lcm(*(x.denominator for row in self._data for x in row))
            rows = [[x.numerator * (den // x.denominator) for x in row] for row in self._data]
            self._scaled = (rows, den)
        return self._scaled

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        i, j = index
        return self._data[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self._data)

    def tolist(self) -> list[list[Fraction]]:
        return [list(row) for row in self._data]

    def __iter__(self):
        return iter(self._data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self._data == other._data

    def __hash__(self) -> int:
        return hash(self._data)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self._data)
        return f"RationalMatrix([{body}])"

    def transpose(self) -> RationalMatrix:
        return RationalMatrix._wrap(tuple(zip(*self._data)))

    @property
    def T(self) -> RationalMatrix:
        return self.transpose()

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            a, da = self._integer_rows()
            b, db = other._integer_rows()
            cols = list(zip(*b))
            den = da * db
            return RationalMatrix._wrap(
                tuple(tuple(Fraction(_idot(row, col), den) for col in cols) for row in a)
            )
        vec = [Fraction(x) for x in other]
        if len(vec) != self.cols:
            raise ValueError(f"vector of length {len(vec)} does not match {self.cols} columns")
        a, da = self._integer_rows()
        dv = lcm(*(x.denominator for x in vec))
        iv = [x.numerator * (dv // x.denominator) for x in vec]
        den = da * dv
        return [Fraction(_idot(row, iv), den) for row in a]

    def __mul__(self, scalar) -> RationalMatrix:
        s = Fraction(scalar)
        return RationalMatrix._wrap(tuple(tuple(s * x for x in row) for row in self._data))

    __rmul__ = __mul__

    def is_identity(self) -> bool:
        return self.is_square and all(
            x == (1 if i == j else 0)
            for i, row in enumerate(self._data)
            for j, x in enumerate(row)
        )

    def det(self) -> Fraction:
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        scale = Fraction(1)
        rows = []
        for row in self._data:
            m = lcm(*(x.denominator for x in row))
            scale *= m
            rows.append([int(x * m) for x in row])
        return Fraction(bareiss_det(rows)) / scale

    def inverse(self) -> RationalMatrix:
        if not self.is_square:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(self._data)]
        _gauss_jordan(aug, n)
        return RationalMatrix._wrap(tuple(tuple(row[n:]) for row in aug))

    def solve(self, rhs: Sequence) -> list[Fraction]:
        """Solve ``self @ x = rhs`` exactly by elimination."""
        if not self.is_square:
            raise ValueError("solve needs a square matrix")
        n = self.rows
        if len(rhs) != n:
            raise ValueError("right-hand side length mismatch")
        aug = [list(row) + [Fraction(b)] for row, b in zip(self._data, rhs)]
        _gauss_jordan(aug, n)
        return [row[n] for row in aug]


def _idot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(map(operator.mul, a, b))


def _gauss_jordan(aug: list[list[Fraction]], n: int) -> None:
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise SingularLinearPart("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        if p != 1:
            aug[col] = [x / p for x in aug[col]]
        prow = aug[col]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], prow)]


def bareiss_det(rows: list[list[int]]) -> int:
    """Determinant of an integer matrix by Bareiss fraction-free elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                # exact division is guaranteed by Sylvester's identity
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]
