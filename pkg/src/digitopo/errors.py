"""Exception types shared across the package."""


class DigitopoError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(DigitopoError):
    """A file could not be parsed. Carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NoSuchComponentError(DigitopoError):
    """A component id outside 1..count was requested."""


class RepairDidNotConverge(DigitopoError):
    """Repair exceeded its action cap without reaching a clean grid."""


class InvalidSurfaceError(DigitopoError):
    """A point set does not classify as a valid closed digital surface."""


class PreconditionFailure(DigitopoError):
    """Formula preconditions failed and the oracle fallback was disabled."""
