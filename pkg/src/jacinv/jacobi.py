"""Principle and derived Jacobi conditions of a polynomial map.

The principle condition is the constant term ``M`` of ``det J_F``.  Every other
coefficient of ``det J_F`` is one derived condition; a map satisfies all of
them exactly when the Jacobian determinant is the constant ``M``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NonConstantJacobian, SingularLinearPart
from .poly import Exponent, PolyMap, Polynomial, jacobian_det


@dataclass(frozen=True)
class JacobiReport:
    principle_value: Fraction
    violations: tuple[tuple[Exponent, Fraction], ...]
    determinant: Polynomial

    @property
    def is_constant(self) -> bool:
        return not self.violations

    def reconstruct(self) -> Polynomial:
        """Rebuild ``det J_F`` from the principle value and the violations."""
        n = self.determinant.num_vars
        terms = dict(self.violations)
        terms[(0,) * n] = self.principle_value
        return Polynomial(n, terms)


def check_jacobi(F: PolyMap) -> JacobiReport:
    det = jacobian_det(F)
    M = det.constant_term
    violations = tuple((e, c) for e, c in det.items() if any(e))
    return JacobiReport(principle_value=M, violations=violations, determinant=det)


def require_unit_jacobian(F: PolyMap) -> Fraction:
    """Return ``M`` when ``det J_F`` is the nonzero constant ``M``."""
    report = check_jacobi(F)
    if report.violations:
        raise NonConstantJacobian(report.violations, report.principle_value)
    if report.principle_value == 0:
        raise SingularLinearPart("Jacobian determinant is identically zero")
    return report.principle_value
