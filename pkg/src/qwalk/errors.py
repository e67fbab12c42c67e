"""Exception types shared across the package."""


class QWalkError(Exception):
    """Base class for all package errors."""


class DomainError(QWalkError, ValueError):
    """A parameter lies outside its admissible domain (e.g. |gamma| > 1)."""


class PreconditionError(QWalkError, ValueError):
    """Inputs violate an operation's precondition."""


class SingularEvaluationError(QWalkError, ZeroDivisionError):
    """A recursion or closed form hit a vanishing denominator."""


class SeriesDivisionError(SingularEvaluationError):
    """Division by a power series whose constant term is (numerically) zero."""


class NumericalLimitError(QWalkError, ArithmeticError):
    """A radial limit or extrapolation did not converge."""


class SingularPointError(NumericalLimitError):
    """The boundary value diverges at this angle: a point mass sits here."""


class ConfigError(QWalkError, ValueError):
    """Invalid command-line configuration."""
