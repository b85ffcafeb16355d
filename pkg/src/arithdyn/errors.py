"""Exception hierarchy.

Every error carries a short machine-readable ``reason`` and an integer
``exit_code`` which the command line front end turns into the process
exit status.
"""

from __future__ import annotations


class ArithDynError(Exception):
    reason = "error"
    exit_code = 10


class ZeroLog(ArithDynError, ValueError):
    reason = "zero_log"
    exit_code = 11


class PolySyntaxError(ArithDynError, SyntaxError):
    """Malformed polynomial text; ``pos`` is the 0-based character offset."""

    reason = "syntax_error"
    exit_code = 12

    def __init__(self, message: str, pos: int, src: str = ""):
        self.pos = pos
        self.src = src
        super().__init__(f"{message} at position {pos}")


class UnknownVariable(PolySyntaxError):
    reason = "unknown_variable"
    exit_code = 13


class NegativeExponent(PolySyntaxError):
    reason = "negative_exponent"
    exit_code = 14


class ArityMismatch(ArithDynError, ValueError):
    reason = "arity_mismatch"
    exit_code = 15


class InhomogeneousInput(ArithDynError, ValueError):
    reason = "inhomogeneous_input"
    exit_code = 16


class ZeroPolynomial(ArithDynError, ValueError):
    reason = "zero_polynomial"
    exit_code = 17


class BudgetExceeded(ArithDynError, RuntimeError):
    reason = "budget_exceeded"
    exit_code = 18


class AllZero(ArithDynError, ValueError):
    reason = "all_zero"
    exit_code = 19


class IndeterminatePoint(ArithDynError, ValueError):
    reason = "hit_indeterminacy"
    exit_code = 20


class DegenerateComposite(ArithDynError, ValueError):
    reason = "degenerate_composite"
    exit_code = 21


class ConvergenceFailure(ArithDynError, RuntimeError):
    reason = "convergence_failure"
    exit_code = 22

    def __init__(self, message: str, interval: tuple[float, float] | None = None):
        self.interval = interval
        super().__init__(message)


class SingularMatrix(ArithDynError, ValueError):
    reason = "singular_matrix"
    exit_code = 23


class TooShort(ArithDynError, ValueError):
    reason = "too_short"
    exit_code = 24


class DeltaNotGreaterThanOne(ArithDynError, ValueError):
    reason = "delta_not_greater_than_one"
    exit_code = 25


class NotStable(ArithDynError, ValueError):
    reason = "not_stable"
    exit_code = 26


class NegativeConstant(ArithDynError, ValueError):
    reason = "negative_constant"
    exit_code = 27


class BoundViolated(ArithDynError, AssertionError):
    reason = "bound_violated"
    exit_code = 28


class SchemaError(ArithDynError, ValueError):
    """Invalid experiment configuration; ``path`` is the dotted field path."""

    reason = "schema_error"
    exit_code = 29

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class NotCertifiedMorphism(ArithDynError, ValueError):
    reason = "not_certified_morphism"
    exit_code = 30
