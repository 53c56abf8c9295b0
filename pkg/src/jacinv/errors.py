"""Exception hierarchy shared by every jacinv module."""

from __future__ import annotations


class JacinvError(Exception):
    """Base class for all domain errors raised by jacinv."""


class VariableCountMismatch(JacinvError, ValueError):
    pass


class ConstantTermError(JacinvError, ValueError):
    """A map component has a nonzero constant term.

    Maps are required to fix the origin.  Translate the input first, e.g.
    replace ``u_i`` by ``u_i - u_i(0)``.
    """

    def __init__(self, component: int, value):
        self.component = component
        self.value = value
        super().__init__(
            f"component {component + 1} has nonzero constant term {value}; "
            f"subtract it to normalize the map so that it fixes the origin"
        )


class SingularLinearPart(JacinvError, ArithmeticError):
    pass


class NonConstantJacobian(JacinvError):
    """The Jacobian determinant has nonconstant terms.

    ``violations`` lists ``(exponent, coefficient)`` pairs in graded order.
    """

    def __init__(self, violations, principle_value=None):
        self.violations = tuple(violations)
        self.principle_value = principle_value
        shown = ", ".join(f"{e}: {c}" for e, c in self.violations[:5])
        more = "" if len(self.violations) <= 5 else f", ... ({len(self.violations)} total)"
        super().__init__(f"Jacobian determinant is not constant; violations {shown}{more}")


class InternalInconsistency(JacinvError, ArithmeticError):
    pass


class DegreeNotComputed(JacinvError, KeyError):
    pass


class InvalidStep(JacinvError, ValueError):
    pass


class OrthogonalityViolated(JacinvError, ValueError):
    pass


class ZeroLeadingCoefficient(JacinvError, ValueError):
    pass


class MapSyntaxError(JacinvError, ValueError):
    """Parse error anchored to a 1-based line and column of the source text."""

    def __init__(self, message: str, line: int, column: int):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")
