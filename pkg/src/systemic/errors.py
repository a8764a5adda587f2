"""Exception types shared across the package."""


class SystemicError(Exception):
    """Base class for all errors raised by this package."""


class GraphFormatError(SystemicError):
    """Malformed edge-list input (syntax, duplicate edge, self-loop, bad index)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DimensionError(SystemicError):
    """Operands have incompatible sizes."""


class DomainError(SystemicError):
    """A parameter is outside its admissible range."""


class ConnectivityError(SystemicError):
    """The graph (or matrix) is disconnected where connectivity is required."""


class NumericalError(SystemicError):
    """An iterative numerical procedure failed to reach its tolerance."""

    def __init__(self, message: str, iterations: int | None = None):
        self.iterations = iterations
        if iterations is not None:
            message = f"{message} (after {iterations} iterations)"
        super().__init__(message)


class GenerationError(SystemicError):
    """Random graph generation exhausted its retry budget."""


class ScaleError(SystemicError):
    """Problem size exceeds what exhaustive enumeration supports."""


class SolverError(SystemicError):
    """The optimization solver could not make progress."""


class ConfigError(SystemicError):
    """A configuration object violates one of its invariants."""


class InputError(SystemicError):
    """An input collection is unusable (for example, empty candidate sets)."""
