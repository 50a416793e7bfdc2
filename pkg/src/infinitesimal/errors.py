"""Exception hierarchy shared by every module of the package."""


class InfinitesimalError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(InfinitesimalError, ValueError):
    """An argument lies outside the domain of an operation."""


class ModeError(DomainError):
    """Exact and approximate scalars were mixed in one operation."""


class NotInvertible(DomainError, ZeroDivisionError):
    """Division by a Fermat real whose standard part is zero."""


class PartialityError(DomainError):
    """A partial accessor was used outside its domain (e.g. the order of a standard real)."""


class PreconditionError(DomainError):
    """A documented precondition of an operation does not hold."""


class EvaluationError(DomainError):
    """A primitive was evaluated outside its natural domain."""

    def __init__(self, primitive: str, message: str):
        super().__init__(f"{primitive}: {message}")
        self.primitive = primitive


class NotSmoothHere(EvaluationError):
    """A function is not smooth at the standard part of a non-standard argument."""


class DivisionByZero(DomainError, ZeroDivisionError):
    """Division by an element that is zero under the filter oracle."""


class ContinuityCounterexample(DomainError):
    """No witness exists for a point of the extended domain of a relation."""


class ParseError(InfinitesimalError):
    """Malformed input text; ``column`` is 1-based."""

    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.column = column
