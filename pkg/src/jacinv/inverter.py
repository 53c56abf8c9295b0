"""Degree-by-degree inversion of unit-Jacobian polynomial maps.

Write the inverse as ``x_i = G_i(u) = sum_m b^i_m u^m``.  Differentiating
``G(F(x)) = x`` gives, for every component ``i`` and variable ``j``,

    sum_m  m_j * b^i_m * F(x)^(m - e_j)  =  C_ij(x) / M

where ``C`` is the adjugate of the Jacobian matrix of ``F`` and ``M`` its
constant determinant.  Taking the degree-``d`` part in ``x`` isolates the
coefficients of total degree ``d + 1``: they enter only through the linear
part ``L`` of ``F``, as ``U^T w = C_ij[d] / M - Y`` with ``U`` the degree-``d``
block matrix of ``L`` and ``w[m'] = (m'_j + 1) * b^i_(m'+e_j)``.  ``Y`` is the
residuum, the degree-``d`` contribution of lower-degree coefficients through
the nonlinear part of ``F``.  The system is solved by ``w = V^T r`` with
``V = build_block(L^-1, d)``.

``invert_oracle`` computes the same series by plain truncated composition and
shares none of this machinery.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import NamedTuple

from .blocks import block_inverse, build_block
from .errors import (
    DegreeNotComputed,
    InternalInconsistency,
    VariableCountMismatch,
    ZeroLeadingCoefficient,
)
from .jacobi import require_unit_jacobian
from .poly import (
    NEG_INFINITY,
    Exponent,
    MinorCache,
    PolyMap,
    Polynomial,
    mul_terms,
)


class Status(enum.Enum):
    CERTIFIED = "certified"
    CAP_REACHED = "cap_reached"
    INCONSISTENT = "inconsistent"


class ResiduumVector(NamedTuple):
    monomials: tuple[Exponent, ...]
    values: tuple[Fraction, ...]

    @property
    def is_zero(self) -> bool:
        return not any(self.values)


@dataclass
class InversionResult:
    source: PolyMap
    method: str
    cap: int
    principle_value: Fraction
    inverse_blocks: dict[int, PolyMap] = field(default_factory=dict)
    residuum: dict[int, dict[tuple[int, int], ResiduumVector]] = field(default_factory=dict)
    status: Status = Status.CAP_REACHED
    degree: int | None = None
    certificate: bool = False
    detail: str = ""
    block_checks: dict[int, bool] = field(default_factory=dict)
    certification_attempts: int = 0

    @property
    def inverse(self) -> PolyMap:
        G = PolyMap.zero(self.source.num_vars)
        for d in sorted(self.inverse_blocks):
            G = G + self.inverse_blocks[d]
        return G

    @property
    def computed_degree(self) -> int:
        return max(self.inverse_blocks, default=0)


def default_cap(F: PolyMap) -> int:
    deg = F.degree
    if deg == NEG_INFINITY or deg < 1:
        return 1
    return max(1, int(deg) ** (F.num_vars - 1))


def cofactor_matrix(F: PolyMap) -> list[list[Polynomial]]:
    """Adjugate of the Jacobian matrix: entry (i, j) is the (j, i) cofactor.

    Satisfies ``J_F · C = det(J_F) · I``.
    """
    cache = MinorCache(F.jacobian_matrix())
    n = F.num_vars
    return [[cache.cofactor(j, i) for j in range(n)] for i in range(n)]


class _PowerTable:
    """Homogeneous parts of ``F^a``, memoized by (exponent, degree)."""

    def __init__(self, F: PolyMap):
        self.n = F.num_vars
        self.parts = [
            {d: p.terms for d, p in c.homogeneous_parts().items()} for c in F.components
        ]
        self._memo: dict[tuple[Exponent, int], dict[Exponent, Fraction]] = {}

    def part(self, a: Exponent, d: int) -> dict[Exponent, Fraction]:
        total = sum(a)
        if d < total:
            return {}
        if total == 0:
            return {(0,) * self.n: Fraction(1)} if d == 0 else {}
        key = (a, d)
        got = self._memo.get(key)
        if got is not None:
            return got
        k = next(i for i, v in enumerate(a) if v)
        rest = list(a)
        rest[k] -= 1
        rest = tuple(rest)
        acc: dict[Exponent, Fraction] = {}
        for e, comp in self.parts[k].items():
            sub = self.part(rest, d - e)
            if sub:
                for m, v in mul_terms(sub, comp).items():
                    acc[m] = acc.get(m, 0) + v
        val = {m: v for m, v in acc.items() if v}
        self._memo[key] = val
        return val


def _certify(F: PolyMap, G: PolyMap) -> bool:
    return G.compose(F).is_identity()


def _finish(result: InversionResult, F: PolyMap, G: PolyMap) -> bool:
    result.certification_attempts += 1
    if _certify(F, G):
        result.status = Status.CERTIFIED
        result.certificate = True
        result.degree = max(1, int(G.degree)) if not G.is_zero() else 0
        return True
    return False


def invert_block_scheme(F: PolyMap, cap: int | None = None, *, solver: str = "transpose",
                        exhaust: bool = False) -> InversionResult:
    """Invert ``F`` through the homogeneous-block linear systems.

    ``cap`` bounds the total degree of the computed inverse.  ``solver`` is
    ``"transpose"`` (multiply by ``V^T``) or ``"elimination"`` (Gaussian
    elimination on ``U^T``, a cross-check path).  With ``exhaust`` the blocks
    keep being computed up to ``cap`` after certification, so residuum
    vectors beyond the inverse degree can be inspected.
    """
    if solver not in ("transpose", "elimination"):
        raise ValueError(f"unknown solver {solver!r}")
    M = require_unit_jacobian(F)
    n = F.num_vars
    if cap is None:
        cap = default_cap(F)
    if cap < 1:
        raise ValueError("cap must be at least 1")
    L = F.linear_part()
    G1 = PolyMap.from_matrix(L.inverse())
    result = InversionResult(source=F, method="block", cap=cap, principle_value=M)
    result.inverse_blocks[1] = G1
    coeffs: list[dict[Exponent, Fraction]] = [dict(c.terms) for c in G1]

    adj = cofactor_matrix(F)
    adj_parts = [[{d: p.terms for d, p in c.homogeneous_parts().items()} for c in row] for row in adj]
    table = _PowerTable(F)
    inv_M = 1 / M
    certified = False
    # G changed since the last certification attempt
    dirty = True

    for d in range(1, cap):
        U = build_block(L, d)
        V = block_inverse(U, L)
        result.block_checks[d] = True
        index = U.monomial_index
        Ut = U.entries.transpose()
        Vt = V.entries.transpose()
        new: list[dict[Exponent, Fraction]] = [{} for _ in range(n)]
        residuum: dict[tuple[int, int], ResiduumVector] = {}
        conflict = None
        for i in range(n):
            lower = [(m, b) for m, b in coeffs[i].items() if 2 <= sum(m) <= d]
            for j in range(n):
                Y: dict[Exponent, Fraction] = {}
                for m, b in lower:
                    if m[j] == 0:
                        continue
                    a = list(m)
                    a[j] -= 1
                    scale = b * m[j]
                    for s, v in table.part(tuple(a), d).items():
                        Y[s] = Y.get(s, 0) + scale * v
                y_vec = tuple(Fraction(Y.get(s, 0)) for s in index)
                residuum[(i, j)] = ResiduumVector(index, y_vec)
                cpart = adj_parts[i][j].get(d, {})
                rhs = [cpart.get(s, 0) * inv_M - y for s, y in zip(index, y_vec)]
                w = Vt @ rhs if solver == "transpose" else Ut.solve(rhs)
                for mp, val in zip(index, w):
                    m = list(mp)
                    m[j] += 1
                    m = tuple(m)
                    coef = val / m[j]
                    prev = new[i].get(m)
                    if prev is None:
                        new[i][m] = coef
                    elif prev != coef:
                        conflict = (i, j, m, prev, coef)
        result.residuum[d] = residuum
        if conflict is not None:
            i, j, m, prev, coef = conflict
            result.status = Status.INCONSISTENT
            result.detail = (
                f"coefficient {m} of component {i + 1} determined as {prev} and {coef} "
                f"(variable {j + 1})"
            )
            return result
        block = PolyMap([Polynomial(n, t) for t in new])
        result.inverse_blocks[d + 1] = block
        for i in range(n):
            coeffs[i].update(block[i].terms)
        if certified:
            continue
        if not block.is_zero():
            dirty = True
        elif dirty:
            certified = _finish(result, F, result.inverse)
            dirty = False
        if certified and not exhaust:
            break

    if not certified and not (dirty and _finish(result, F, result.inverse)):
        result.status = Status.CAP_REACHED
    return result


def invert_oracle(F: PolyMap, cap: int | None = None) -> InversionResult:
    """Formal series inversion by truncated composition, independent of the block scheme.

    With ``G_1 = L^-1``, each further block is
    ``G_d(u) = -[(G_1 + ... + G_(d-1)) ∘ F]_d (L^-1 u)``.
    """
    M = require_unit_jacobian(F)
    if cap is None:
        cap = default_cap(F)
    if cap < 1:
        raise ValueError("cap must be at least 1")
    Linv = PolyMap.from_matrix(F.linear_part().inverse())
    result = InversionResult(source=F, method="oracle", cap=cap, principle_value=M)
    result.inverse_blocks[1] = Linv
    G = Linv
    certified = False
    dirty = True
    for d in range(2, cap + 1):
        R = G.compose(F, max_degree=d).homogeneous_part(d)
        block = (-R).compose(Linv)
        result.inverse_blocks[d] = block
        G = G + block
        if not block.is_zero():
            dirty = True
        elif dirty:
            certified = _finish(result, F, G)
            dirty = False
            if certified:
                break
    if not certified and not (dirty and _finish(result, F, G)):
        result.status = Status.CAP_REACHED
    return result


def verify_inverse(F: PolyMap, G: PolyMap) -> bool:
    """True iff ``G ∘ F`` and ``F ∘ G`` are both the identity, exactly."""
    if F.num_vars != G.num_vars:
        raise VariableCountMismatch("maps disagree on variable count")
    return G.compose(F).is_identity() and F.compose(G).is_identity()


def residuum_report(result: InversionResult, d: int) -> dict[tuple[int, int], ResiduumVector]:
    if d not in result.residuum:
        raise DegreeNotComputed(f"no residuum stored for block degree {d}")
    return dict(result.residuum[d])


def invert_special_42(f: Polynomial, g: Polynomial) -> PolyMap:
    """Closed-form inverse of a pair ``(f, g)`` in two variables with ``g`` linear.

    With ``g = b10 x + b01 y`` and ``det J = M``,

        x = (b01 f - a01 g - sum_r a0r / b01^(r-1) g^r) / M
        y = (-b10 f + a10 g + sum_r a1(r-1) / (r b01^(r-1)) g^r) / M

    for ``r = 2..deg f``, where ``a`` are the coefficients of ``f``.
    """
    if f.num_vars != 2 or g.num_vars != 2:
        raise VariableCountMismatch("the closed form is for two variables")
    if g.degree != NEG_INFINITY and g.degree > 1:
        raise ValueError("g must be linear")
    F = PolyMap([f, g])
    b10 = g.coefficient((1, 0))
    b01 = g.coefficient((0, 1))
    if b01 == 0:
        raise ZeroLeadingCoefficient("coefficient of y in g must be nonzero")
    M = require_unit_jacobian(F)
    a10 = f.coefficient((1, 0))
    a01 = f.coefficient((0, 1))
    U1 = Polynomial.variable(2, 0)
    U2 = Polynomial.variable(2, 1)
    x = U1 * b01 - U2 * a01
    y = U1 * (-b10) + U2 * a10
    k = int(f.degree)
    for r in range(2, k + 1):
        scale = b01 ** (r - 1)
        gr = U2 ** r
        x = x - gr * (f.coefficient((0, r)) / scale)
        y = y + gr * (f.coefficient((1, r - 1)) / (r * scale))
    G = PolyMap([x / M, y / M])
    if not verify_inverse(F, G):
        raise InternalInconsistency("closed-form inverse failed exact verification")
    return G


def degree_relation_diagnostic(F: PolyMap, G: PolyMap) -> dict[tuple[int, int], bool | None]:
    """Check ``deg_(u_j)(x_i) = p * lcm(m) / deg_(x_i)(u_j)`` for some integer ``p >= 1``.

    ``m_j = deg_(x_i)(u_j)``.  Pairs where the relation is undefined (a zero
    degree) map to ``None``.  Purely informational.
    """
    n = F.num_vars
    out: dict[tuple[int, int], bool | None] = {}
    for i in range(n):
        degs = [F[j].degree_in(i) for j in range(n)]
        positive = [int(m) for m in degs if m != NEG_INFINITY and m > 0]
        base = lcm(*positive) if positive else 0
        for j in range(n):
            m = degs[j]
            inv = G[i].degree_in(j)
            if not base or m == NEG_INFINITY or m <= 0 or inv == NEG_INFINITY or inv <= 0:
                out[(i, j)] = None
                continue
            unit = Fraction(base, int(m))
            ratio = Fraction(int(inv)) / unit
            out[(i, j)] = ratio.denominator == 1 and ratio >= 1
    return out
