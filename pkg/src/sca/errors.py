"""Exception hierarchy shared by every module."""


class ScaError(Exception):
    """Base class for all package errors."""


class ParameterError(ScaError, ValueError):
    """An argument violates a documented precondition."""


class ParseError(ScaError, ValueError):
    """Input file content could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DegenerateMarginError(ParameterError):
    """A count matrix has an all-zero row or column."""


class IsolatedVertexError(ParameterError):
    """A vertex has zero degree, so the chain cannot be normalized."""

    def __init__(self, vertex):
        super().__init__(f"vertex {vertex} has zero degree")
        self.vertex = vertex


class NumericalError(ScaError, ArithmeticError):
    """A numerical routine failed to meet its accuracy contract."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class IllConditionedExtensionError(NumericalError):
    """Nystrom extension requested for an eigenvalue too close to zero."""


class DisconnectedGraphError(ScaError):
    """Raised only when disconnection is promoted from warning to error."""
