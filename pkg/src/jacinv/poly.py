"""Sparse multivariate polynomials and polynomial maps over the rationals.

A polynomial in ``n`` variables stores a dict from exponent tuples (length
``n``) to nonzero ``Fraction`` coefficients.  The zero polynomial is the empty
dict and has degree ``NEG_INFINITY``.

Canonical term order is graded: ascending total degree, and inside one degree
lexicographically descending exponents, so the degree-2 block in two
variables reads ``x^2, x*y, y^2``.

Variable indices in this API are 0-based.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import ConstantTermError, VariableCountMismatch
from .matrix import RationalMatrix

Exponent = tuple[int, ...]
Scalar = Union[int, Fraction]

NEG_INFINITY = float("-inf")


def term_order_key(exponent: Exponent):
    return (sum(exponent), tuple(-k for k in exponent))


def unit_exponent(num_vars: int, i: int) -> Exponent:
    e = [0] * num_vars
    e[i] = 1
    return tuple(e)


def _strip(terms: dict) -> dict:
    return {e: c for e, c in terms.items() if c}


class Polynomial:
    """Immutable sparse polynomial with ``Fraction`` coefficients."""

    __slots__ = ("num_vars", "_terms", "_hash")

    def __init__(self, num_vars: int, terms: Mapping[Sequence[int], Scalar] | None = None):
        if num_vars < 1:
            raise ValueError("a polynomial needs at least one variable")
        clean: dict[Exponent, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != num_vars:
                raise VariableCountMismatch(
                    f"exponent {e} has length {len(e)}, expected {num_vars}"
                )
            if any(k < 0 for k in e):
                raise ValueError(f"negative exponent in {e}")
            c = Fraction(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        self.num_vars = num_vars
        self._terms = _strip(clean)
        self._hash = None

    @classmethod
    def _raw(cls, num_vars: int, terms: dict[Exponent, Fraction]) -> Polynomial:
        # terms must already be canonical (no zeros, Fraction values)
        obj = cls.__new__(cls)
        obj.num_vars = num_vars
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, num_vars: int) -> Polynomial:
        return cls._raw(num_vars, {})

    @classmethod
    def constant(cls, num_vars: int, value: Scalar) -> Polynomial:
        value = Fraction(value)
        return cls._raw(num_vars, {(0,) * num_vars: value} if value else {})

    @classmethod
    def one(cls, num_vars: int) -> Polynomial:
        return cls.constant(num_vars, 1)

    @classmethod
    def variable(cls, num_vars: int, i: int) -> Polynomial:
        if not 0 <= i < num_vars:
            raise IndexError(f"variable index {i} out of range for {num_vars} variables")
        return cls._raw(num_vars, {unit_exponent(num_vars, i): Fraction(1)})

    @classmethod
    def monomial(cls, exponent: Sequence[int], coefficient: Scalar = 1) -> Polynomial:
        return cls(len(exponent), {tuple(exponent): coefficient})

    @classmethod
    def linear_form(cls, coefficients: Sequence[Scalar]) -> Polynomial:
        n = len(coefficients)
        return cls(n, {unit_exponent(n, i): c for i, c in enumerate(coefficients)})

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return self._terms

    def items(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in canonical graded order."""
        return sorted(self._terms.items(), key=lambda t: term_order_key(t[0]))

    def __iter__(self) -> Iterator[tuple[Exponent, Fraction]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exponent: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exponent), Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.num_vars)

    @property
    def degree(self):
        """Total degree; ``NEG_INFINITY`` for the zero polynomial."""
        if not self._terms:
            return NEG_INFINITY
        return max(sum(e) for e in self._terms)

    @property
    def min_degree(self):
        if not self._terms:
            return NEG_INFINITY
        return min(sum(e) for e in self._terms)

    def degree_in(self, i: int):
        """Highest power of variable ``i`` (``NEG_INFINITY`` for zero)."""
        if not self._terms:
            return NEG_INFINITY
        return max(e[i] for e in self._terms)

    def variables(self) -> set[int]:
        return {i for e in self._terms for i, k in enumerate(e) if k}

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    # -- equality -----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.num_vars == other.num_vars and self._terms == other._terms
        if isinstance(other, (int, Rational)):
            return self._terms == ({(0,) * self.num_vars: other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num_vars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            return f"Polynomial({self.num_vars}, 0)"
        body = " + ".join(f"{c}*x^{e}" for e, c in self.items())
        return f"Polynomial({self.num_vars}, {body})"

    # -- ring operations ----------------------------------------------------

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.num_vars != self.num_vars:
                raise VariableCountMismatch(
                    f"cannot combine polynomials in {self.num_vars} and {other.num_vars} variables"
                )
            return other
        if isinstance(other, (int, Rational)):
            return Polynomial.constant(self.num_vars, other)
        raise TypeError(f"unsupported operand {type(other).__name__}")

    def __add__(self, other) -> Polynomial:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if len(other._terms) > len(self._terms):
            a, b = other._terms, self._terms
        else:
            a, b = self._terms, other._terms
        out = dict(a)
        for e, c in b.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v += c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Polynomial._raw(self.num_vars, out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial._raw(self.num_vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> Polynomial:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> Polynomial:
        return (-self) + other

    def scale(self, factor: Scalar) -> Polynomial:
        factor = Fraction(factor)
        if not factor:
            return Polynomial.zero(self.num_vars)
        return Polynomial._raw(self.num_vars, {e: c * factor for e, c in self._terms.items()})

    def __mul__(self, other) -> Polynomial:
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            return self.scale(other)
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return Polynomial._raw(self.num_vars, mul_terms(self._terms, other._terms))

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> Polynomial:
        if not isinstance(scalar, (int, Rational)):
            return NotImplemented
        return self.scale(1 / Fraction(scalar))

    def __pow__(self, k: int) -> Polynomial:
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.one(self.num_vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_truncated(self, other: Polynomial, max_degree: int) -> Polynomial:
        other = self._coerce(other)
        return Polynomial._raw(self.num_vars, mul_terms(self._terms, other._terms, max_degree))

    # -- structure ----------------------------------------------------------

    def partial(self, i: int) -> Polynomial:
        """Formal partial derivative with respect to variable ``i``."""
        if not 0 <= i < self.num_vars:
            raise IndexError(f"variable index {i} out of range for {self.num_vars} variables")
        out = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                d = list(e)
                d[i] = k - 1
                out[tuple(d)] = c * k
        return Polynomial._raw(self.num_vars, out)

    def homogeneous_part(self, d: int) -> Polynomial:
        if d < 0:
            raise ValueError("degree must be non-negative")
        return Polynomial._raw(
            self.num_vars, {e: c for e, c in self._terms.items() if sum(e) == d}
        )

    def homogeneous_parts(self) -> dict[int, Polynomial]:
        buckets: dict[int, dict] = {}
        for e, c in self._terms.items():
            buckets.setdefault(sum(e), {})[e] = c
        return {d: Polynomial._raw(self.num_vars, t) for d, t in sorted(buckets.items())}

    def truncate(self, max_degree: int) -> Polynomial:
        return Polynomial._raw(
            self.num_vars, {e: c for e, c in self._terms.items() if sum(e) <= max_degree}
        )

    def compose(self, subst: Sequence[Polynomial], max_degree: int | None = None) -> Polynomial:
        """Substitute ``x_i := subst[i]``; optionally drop terms above ``max_degree``."""
        return compose(self, subst, max_degree)


# Hot loops pack an exponent tuple into one int, 16 bits per variable, so that
# multiplying monomials is integer addition.  The total degree of a packed
# exponent is its base-2^16 digit sum, i.e. ``packed % (2^16 - 1)`` while every
# degree stays below 2^16 - 1.
_BITS = 16
_FIELD = (1 << _BITS) - 1


def _pack(e: Exponent) -> int:
    v = 0
    for k in reversed(e):
        v = (v << _BITS) | k
    return v


def _unpack(v: int, n: int) -> Exponent:
    return tuple((v >> (_BITS * i)) & _FIELD for i in range(n))


def _integer_form(terms: Mapping[Exponent, Fraction]) -> tuple[dict[int, int], int]:
    """Packed exponents and numerators over a common denominator."""
    den = lcm(*(c.denominator for c in terms.values())) if terms else 1
    return {_pack(e): c.numerator * (den // c.denominator) for e, c in terms.items()}, den


def _from_integer_form(nums: Mapping[int, int], den: int, n: int) -> dict[Exponent, Fraction]:
    if den == 1:
        return {_unpack(e, n): Fraction(v) for e, v in nums.items() if v}
    return {_unpack(e, n): Fraction(v, den) for e, v in nums.items() if v}


def _imul(a: Mapping[int, int], b: Mapping[int, int], max_degree: int | None = None) -> dict[int, int]:
    if len(a) < len(b):
        a, b = b, a
    out: dict[int, int] = {}
    get = out.get
    if max_degree is None:
        items = list(a.items())
        for eb, cb in b.items():
            for ea, ca in items:
                e = ea + eb
                out[e] = get(e, 0) + ca * cb
    else:
        da = sorted(((ea, ca, ea % _FIELD) for ea, ca in a.items()), key=lambda t: t[2])
        for eb, cb in b.items():
            room = max_degree - eb % _FIELD
            for ea, ca, dega in da:
                if dega > room:
                    break
                e = ea + eb
                out[e] = get(e, 0) + ca * cb
    return out


def mul_terms(a: Mapping[Exponent, Fraction], b: Mapping[Exponent, Fraction],
              max_degree: int | None = None) -> dict[Exponent, Fraction]:
    """Product of two term dicts, exact; integer arithmetic on the inside."""
    if not a or not b:
        return {}
    n = len(next(iter(a)))
    ia, da = _integer_form(a)
    ib, db = _integer_form(b)
    return _from_integer_form(_imul(ia, ib, max_degree), da * db, n)


def compose(p: Polynomial, subst: Sequence[Polynomial], max_degree: int | None = None) -> Polynomial:
    """Return ``p(subst[0], ..., subst[n-1])``, exactly.

    With ``max_degree`` set, terms of total degree above it are discarded; when
    no substituted polynomial has a constant term this is the exact truncation.
    """
    subst = list(subst)
    if len(subst) != p.num_vars:
        raise VariableCountMismatch(
            f"substitution has {len(subst)} entries for {p.num_vars} variables"
        )
    m = subst[0].num_vars
    if any(s.num_vars != m for s in subst):
        raise VariableCountMismatch("substituted polynomials disagree on variable count")
    if p.is_zero():
        return Polynomial.zero(m)
    origin_fixed = all(not s.constant_term for s in subst)
    # every substituted polynomial as integer numerators over one shared denominator
    sden = lcm(*(c.denominator for s in subst for c in s.terms.values())) if any(subst) else 1
    ints = [
        {_pack(e): c.numerator * (sden // c.denominator) for e, c in s.terms.items()}
        for s in subst
    ]
    terms = dict(p.terms)
    if max_degree is not None and origin_fixed:
        terms = {e: c for e, c in terms.items() if sum(e) <= max_degree}
    if not terms:
        return Polynomial.zero(m)
    budget = max_degree if origin_fixed else None
    nums, den = _horner(terms, ints, sden, budget)
    out = Polynomial._raw(m, _from_integer_form(nums, den, m))
    if max_degree is not None and not origin_fixed:
        out = out.truncate(max_degree)
    return out


def _horner(terms: dict[Exponent, Fraction], ints: list[dict[int, int]], sden: int,
            budget: int | None) -> tuple[dict[int, int], int]:
    """Evaluate ``sum c_e s^e`` as ``c_0 + sum_k s_k * P_k`` with ``P_k`` free of later variables.

    Each substituted polynomial ``s_k`` is ``ints[k] / sden``.  ``budget`` caps
    the total degree kept; it drops by one per factor, which is exact when no
    ``s_k`` has a constant term.  Returns integer numerators and a denominator.
    """
    groups: dict[int, dict[Exponent, Fraction]] = {}
    const = Fraction(0)
    for e, c in terms.items():
        k = len(e) - 1
        while k >= 0 and not e[k]:
            k -= 1
        if k < 0:
            const += c
            continue
        rest = list(e)
        rest[k] -= 1
        groups.setdefault(k, {})[tuple(rest)] = c
    acc: dict[int, int] = {0: const.numerator} if const else {}
    acc_den = const.denominator
    inner_budget = None if budget is None else budget - 1
    for k, sub in groups.items():
        if inner_budget is not None and inner_budget < 0:
            break
        nums, den = _horner(sub, ints, sden, inner_budget)
        prod = _imul(nums, ints[k], budget)
        den *= sden
        common = lcm(acc_den, den)
        fa, fp = common // acc_den, common // den
        if fa != 1:
            acc = {e: v * fa for e, v in acc.items()}
        get = acc.get
        for e, v in prod.items():
            acc[e] = get(e, 0) + v * fp
        acc_den = common
    return acc, acc_den


def _as_polys(subst) -> list[Polynomial]:
    if isinstance(subst, PolyMap):
        return list(subst.components)
    return list(subst)


class PolyMap:
    """A polynomial map ``x -> (u_1(x), ..., u_n(x))`` fixing the origin."""

    __slots__ = ("num_vars", "components")

    def __init__(self, components: Sequence[Polynomial]):
        comps = tuple(components)
        n = len(comps)
        if n < 1:
            raise ValueError("a map needs at least one component")
        for k, c in enumerate(comps):
            if c.num_vars != n:
                raise VariableCountMismatch(
                    f"component {k + 1} has {c.num_vars} variables, expected {n}"
                )
            if c.constant_term:
                raise ConstantTermError(k, c.constant_term)
        self.num_vars = n
        self.components = comps

    @classmethod
    def identity(cls, n: int) -> PolyMap:
        return cls([Polynomial.variable(n, i) for i in range(n)])

    @classmethod
    def from_matrix(cls, L: RationalMatrix) -> PolyMap:
        if not L.is_square:
            raise ValueError("linear map needs a square matrix")
        return cls([Polynomial.linear_form(L.row(i)) for i in range(L.rows)])

    @classmethod
    def zero(cls, n: int) -> PolyMap:
        return cls([Polynomial.zero(n)] * n)

    def __getitem__(self, i: int) -> Polynomial:
        return self.components[i]

    def __iter__(self) -> Iterator[Polynomial]:
        return iter(self.components)

    def __len__(self) -> int:
        return self.num_vars

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __repr__(self) -> str:
        return f"PolyMap({list(self.components)!r})"

    def __add__(self, other: PolyMap) -> PolyMap:
        if not isinstance(other, PolyMap):
            return NotImplemented
        if other.num_vars != self.num_vars:
            raise VariableCountMismatch("maps disagree on variable count")
        return PolyMap([a + b for a, b in zip(self, other)])

    def __neg__(self) -> PolyMap:
        return PolyMap([-c for c in self])

    def __sub__(self, other: PolyMap) -> PolyMap:
        return self + (-other)

    def scale(self, factor: Scalar) -> PolyMap:
        return PolyMap([c.scale(factor) for c in self])

    @property
    def degree(self):
        return max(c.degree for c in self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def is_identity(self) -> bool:
        return self == PolyMap.identity(self.num_vars)

    def compose(self, inner, max_degree: int | None = None) -> PolyMap:
        """``self ∘ inner``: the map ``x -> self(inner(x))``."""
        subs = _as_polys(inner)
        if len(subs) != self.num_vars:
            raise VariableCountMismatch("maps disagree on variable count")
        return PolyMap([compose(c, subs, max_degree) for c in self.components])

    def __matmul__(self, inner: PolyMap) -> PolyMap:
        return self.compose(inner)

    def linear_part(self) -> RationalMatrix:
        n = self.num_vars
        return RationalMatrix(
            [[c.coefficient(unit_exponent(n, j)) for j in range(n)] for c in self.components]
        )

    def homogeneous_part(self, d: int) -> PolyMap:
        return PolyMap([c.homogeneous_part(d) for c in self.components])

    def truncate(self, max_degree: int) -> PolyMap:
        return PolyMap([c.truncate(max_degree) for c in self.components])

    def jacobian_matrix(self) -> list[list[Polynomial]]:
        """Row ``i`` holds the partials of component ``i``."""
        return [[c.partial(j) for j in range(self.num_vars)] for c in self.components]


class MinorCache:
    """Memoized Laplace expansion for determinants of a polynomial matrix.

    Minors are keyed by (row tuple, column tuple), so the full determinant and
    all cofactors of one matrix share sub-determinants.
    """

    def __init__(self, entries: Sequence[Sequence[Polynomial]]):
        self.entries = [list(r) for r in entries]
        self.n = len(self.entries)
        if any(len(r) != self.n for r in self.entries):
            raise ValueError("polynomial matrix must be square")
        self.num_vars = self.entries[0][0].num_vars if self.n else 1
        self._memo: dict[tuple[tuple[int, ...], tuple[int, ...]], Polynomial] = {}

    def det(self, rows: tuple[int, ...] | None = None, cols: tuple[int, ...] | None = None) -> Polynomial:
        if rows is None:
            rows = tuple(range(self.n))
        if cols is None:
            cols = tuple(range(self.n))
        if len(rows) != len(cols):
            raise ValueError("minor must be square")
        return self._det(rows, cols)

    def _det(self, rows, cols) -> Polynomial:
        if not rows:
            return Polynomial.one(self.num_vars)
        key = (rows, cols)
        got = self._memo.get(key)
        if got is not None:
            return got
        if len(rows) == 1:
            val = self.entries[rows[0]][cols[0]]
        else:
            top = self.entries[rows[0]]
            rest = rows[1:]
            acc: dict[Exponent, Fraction] = {}
            for k, c in enumerate(cols):
                a = top[c]
                if a.is_zero():
                    continue
                sub = self._det(rest, cols[:k] + cols[k + 1:])
                if sub.is_zero():
                    continue
                prod = mul_terms(a.terms, sub.terms)
                if k % 2:
                    for e, v in prod.items():
                        acc[e] = acc.get(e, 0) - v
                else:
                    for e, v in prod.items():
                        acc[e] = acc.get(e, 0) + v
            val = Polynomial._raw(self.num_vars, _strip(acc))
        self._memo[key] = val
        return val

    def cofactor(self, i: int, j: int) -> Polynomial:
        """Signed minor: ``(-1)^(i+j)`` times det with row ``i`` and column ``j`` removed."""
        rows = tuple(r for r in range(self.n) if r != i)
        cols = tuple(c for c in range(self.n) if c != j)
        m = self._det(rows, cols)
        return -m if (i + j) % 2 else m


def jacobian_det(F: PolyMap) -> Polynomial:
    return MinorCache(F.jacobian_matrix()).det()


def polynomial_from_terms(num_vars: int, terms: Iterable[tuple[Sequence[int], Scalar]]) -> Polynomial:
    acc: dict[Exponent, Fraction] = {}
    for e, c in terms:
        e = tuple(e)
        acc[e] = acc.get(e, 0) + Fraction(c)
    return Polynomial(num_vars, acc)


# Function forms of the ring operations, for callers that prefer them.

def ring_add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def ring_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def partial_derivative(p: Polynomial, i: int) -> Polynomial:
    return p.partial(i)


def homogeneous_part(p: Polynomial, d: int) -> Polynomial:
    return p.homogeneous_part(d)
