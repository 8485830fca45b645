"""Exception hierarchy shared by all subcurv modules."""


class SubcurvError(Exception):
    """Base class for every error raised by this package."""


class ArgumentError(SubcurvError, ValueError):
    pass


class UnsupportedOperation(SubcurvError):
    pass


class NumericalFailure(SubcurvError):
    """An eigensolver or linear solve did not produce a usable answer."""


class DomainError(SubcurvError):
    """A map could not be evaluated at a requested point."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class BoundaryError(DomainError):
    """The finite-difference stencil would leave the declared domain box."""


class RankDeficiencyError(SubcurvError):
    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


class DegenerateImmersionError(SubcurvError):
    pass


class FrameConventionError(SubcurvError):
    pass


class ParseError(SubcurvError):
    """Syntax error in an immersion expression.

    ``position`` is the 1-based character offset of the offending token.
    """

    def __init__(self, message, position=None, expected=None):
        if position is not None:
            message = f"{message} at position {position}"
        if expected:
            message = f"{message} (expected {expected})"
        super().__init__(message)
        self.position = position
        self.expected = expected


class NumericalDomainError(DomainError):
    """NaN/Inf or an undefined operation while evaluating an expression."""


class UnknownIdentifierError(ParseError):
    pass


class ArityError(ParseError):
    pass


class VariableIndexError(ParseError):
    pass
