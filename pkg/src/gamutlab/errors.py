"""Exception types shared across the package."""


class GamutLabError(Exception):
    """Base class for all gamutlab errors."""


class DomainError(GamutLabError, ValueError):
    """An argument violates a documented precondition or invariant."""


class CapacityError(DomainError):
    """A container was offered more elements than it can hold."""


class ParseError(GamutLabError, ValueError):
    """Malformed input text or bytes.

    ``position`` is a byte offset for binary formats and a 1-based line
    number for text formats; ``None`` when no position applies.
    """

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)
