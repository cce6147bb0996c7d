"""Exception hierarchy shared by every layer of the package."""


class AsymptoteError(Exception):
    """Base class for all domain errors raised by this package."""


class IncompatibleExtension(AsymptoteError):
    """Two algebraic numbers live in different extension fields."""


class ReducibleModulus(AsymptoteError):
    """A proposed minimal polynomial factors over the rationals."""


class NotDivisible(AsymptoteError):
    """Exact division was requested but the remainder is nonzero."""


class InvalidElimination(AsymptoteError):
    """A resultant was requested for a polynomial free of the eliminated variable."""


class InvalidTransform(AsymptoteError):
    """A coordinate change matrix is singular."""


class NotACurve(AsymptoteError):
    """The two input surfaces share a component, so they do not cut out a curve."""


class NeedsCoordinateChange(AsymptoteError):
    """The projection direction is not valid for the branch machinery."""


class NoValidDirection(AsymptoteError):
    """Every attempted coordinate change failed to give a valid direction."""


class NeedsMoreTerms(AsymptoteError):
    """A truncated series does not carry enough terms for the requested result."""


class InternalInconsistency(AsymptoteError):
    """An invariant that the theory guarantees was observed to fail."""


class ParseError(AsymptoteError):
    """Malformed polynomial text, with a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.reason = message
