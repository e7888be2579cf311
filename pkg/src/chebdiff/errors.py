"""Exception hierarchy shared by every module of the package."""


class ChebError(Exception):
    """Base class for all package errors."""


class ExpressionSyntaxError(ChebError, ValueError):
    """Malformed expression source; ``position`` is the 0-based offset."""

    def __init__(self, message: str, position: int, source: str = ""):
        self.position = position
        self.source = source
        super().__init__(f"{message} at offset {position}")


class UnknownIdentifierError(ExpressionSyntaxError):
    pass


class DomainViolationError(ChebError, ValueError):
    """An expression is undefined (non-finite) somewhere on its domain, or a
    point lies outside the domain."""


class NonDifferentiableError(ChebError, ValueError):
    pass


class QuadratureError(ChebError, RuntimeError):
    """Requested tolerance not reached within the evaluation budget."""


class MissingConstantError(ChebError, KeyError):
    pass


class PreconditionError(ChebError, ValueError):
    """Invalid interval configuration, exponent, or other input."""
