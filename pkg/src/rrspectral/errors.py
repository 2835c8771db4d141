"""Exception hierarchy. The CLI maps these onto exit codes."""


class RRSpectralError(Exception):
    """Base class for all package errors."""


class GraphError(RRSpectralError, ValueError):
    """Invalid vertex ids, self-loops, mismatched vertex sets."""


class DegenerateCutError(GraphError):
    """A cut with an empty side was passed where a proper bipartition is needed."""


class DisconnectedGraphError(GraphError):
    def __init__(self, message, n_components=None):
        super().__init__(message)
        self.n_components = n_components


class DataFormatError(RRSpectralError, ValueError):
    """Malformed input file. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NumericalError(RRSpectralError, ArithmeticError):
    """Eigensolver non-convergence or a violated numerical precondition."""
