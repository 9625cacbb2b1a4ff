"""Semantic exception hierarchy shared by all infodist modules."""


class InfodistError(Exception):
    """Base class for every error raised by this package."""


class SchemaError(InfodistError, ValueError):
    """Invalid variable schema: duplicate names, bad cardinality, state-space overflow."""


class DomainError(InfodistError, ValueError):
    """An operation was called outside its contract (bad subset, mismatched schemas, ...)."""


class ParseError(InfodistError, ValueError):
    """Malformed input text. Carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyDataError(InfodistError, ValueError):
    """A dataset with zero rows was used where at least one sample is required."""


class IncompleteProfileError(InfodistError, LookupError):
    """An information profile is missing an entry needed for a reconstruction."""


class UndefinedApproximationError(DomainError):
    """A truncated factor product divides by a zero marginal at a live state."""

    def __init__(self, message: str, state: tuple[int, ...]):
        self.state = state
        super().__init__(message)


class UndefinedDistanceError(DomainError):
    """A distance integrand is 0/0 on the reference support."""

    def __init__(self, message: str, state: tuple[int, ...]):
        self.state = state
        super().__init__(message)
