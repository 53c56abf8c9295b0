"""Homogeneous-block matrices of a linear map.

For an ``n x n`` matrix ``L`` and a degree ``d``, the block matrix ``U`` has
one row and one column per degree-``d`` monomial (lexicographically
descending).  Row ``m`` holds the coefficients of ``prod_j (L_j . x)^(m_j)``,
so ``U`` is the degree-``d`` symmetric power of ``L``.  It is multiplicative in
``L``, which makes ``build_block(L^-1, d)`` the exact inverse of
``build_block(L, d)``, and ``det U = (det L)^C(d+n-1, n)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import InternalInconsistency, SingularLinearPart
from .matrix import RationalMatrix
from .poly import Exponent, Polynomial


@lru_cache(maxsize=None)
def monomials(num_vars: int, degree: int) -> tuple[Exponent, ...]:
    """All exponents of total ``degree``, lexicographically descending."""
    if num_vars == 1:
        return ((degree,),)
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(num_vars - 1, degree - first):
            out.append((first,) + rest)
    return tuple(out)


def block_size(num_vars: int, degree: int) -> int:
    return comb(degree + num_vars - 1, num_vars - 1)


def det_exponent(num_vars: int, degree: int) -> int:
    return comb(degree + num_vars - 1, num_vars)


@dataclass(frozen=True)
class BlockMatrix:
    num_vars: int
    degree: int
    monomial_index: tuple[Exponent, ...]
    entries: RationalMatrix

    @property
    def size(self) -> int:
        return len(self.monomial_index)


def _symmetric_power(L: RationalMatrix, d: int) -> BlockMatrix:
    n = L.rows
    index = monomials(n, d)
    forms = [Polynomial.linear_form(L.row(j)) for j in range(n)]
    powers: dict[tuple[int, int], Polynomial] = {}

    def power(j: int, k: int) -> Polynomial:
        if (j, k) not in powers:
            powers[(j, k)] = Polynomial.one(n) if k == 0 else power(j, k - 1) * forms[j]
        return powers[(j, k)]

    rows = []
    for m in index:
        p = Polynomial.one(n)
        for j, k in enumerate(m):
            if k:
                p = p * power(j, k)
        rows.append([p.coefficient(s) for s in index])
    return BlockMatrix(n, d, index, RationalMatrix(rows))


def build_block(L: RationalMatrix, d: int) -> BlockMatrix:
    if not L.is_square:
        raise ValueError("linear part must be square")
    if d < 1:
        raise ValueError("block degree must be at least 1")
    if L.det() == 0:
        raise SingularLinearPart("linear part is singular")
    return _symmetric_power(L, d)


def block_inverse(U: BlockMatrix, L: RationalMatrix) -> BlockMatrix:
    """Inverse of ``U = build_block(L, d)`` as ``build_block(L^-1, d)``, checked exactly."""
    if L.det() == 0:
        raise SingularLinearPart("linear part is singular")
    V = _symmetric_power(L.inverse(), U.degree)
    if not (U.entries @ V.entries).is_identity():
        raise InternalInconsistency(f"U·V != I for the degree-{U.degree} block")
    return V


def det_block(L: RationalMatrix, d: int) -> Fraction:
    """Determinant of the degree-``d`` block, checked against ``(det L)^C(d+n-1, n)``."""
    if not L.is_square:
        raise ValueError("linear part must be square")
    if d < 1:
        raise ValueError("block degree must be at least 1")
    value = _symmetric_power(L, d).entries.det()
    expected = L.det() ** det_exponent(L.rows, d)
    if value != expected:
        raise InternalInconsistency(
            f"det of degree-{d} block is {value}, expected {expected}"
        )
    return value


def det_pattern(num_vars: int, max_degree: int) -> list[tuple[int, int, int]]:
    """Rows ``(degree, block size, power of det L)`` for degrees ``1..max_degree``."""
    return [(d, block_size(num_vars, d), det_exponent(num_vars, d)) for d in range(1, max_degree + 1)]


# Row order x1^2, x2^2, x3^2, x1x2, x1x3, x2x3 and column order
# u1^2, u1u2, u1u3, u2^2, u3^2, u2u3, as in the quadratic three-variable system.
_A_ROWS = ((2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (0, 1, 1))
_A_COLS = ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 0, 2), (0, 1, 1))


def quadratic_system_matrix(L: RationalMatrix) -> RationalMatrix:
    """The 6x6 coefficient matrix of the quadratic three-variable system.

    Entry (s, m) is the coefficient of ``x^s`` in ``(L x)^m``, written out from
    the columns of ``L`` rather than through ``build_block``.
    """
    if L.shape != (3, 3):
        raise ValueError("three-variable system needs a 3x3 linear part")
    col = [L.column(k) for k in range(3)]

    def entry(s: Exponent, m: Exponent) -> Fraction:
        # factors of (Lx)^m: one linear form per unit in m
        forms = [j for j in range(3) for _ in range(m[j])]
        vars_ = [k for k in range(3) for _ in range(s[k])]
        a, b = forms
        p, q = vars_
        if p == q:
            return col[p][a] * col[p][b]
        return col[p][a] * col[q][b] + col[q][a] * col[p][b]

    return RationalMatrix([[entry(s, m) for m in _A_COLS] for s in _A_ROWS])
