"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class CfiForgeError(Exception):
    """Base class for every error raised by the toolkit."""


class ParameterError(CfiForgeError, ValueError):
    """An argument is outside its documented range."""


class ValidationError(CfiForgeError, ValueError):
    """An input object violates a structural precondition."""


class StructuralError(CfiForgeError, ValueError):
    """Two objects that must share an index set do not."""


class ResourceLimitError(CfiForgeError, RuntimeError):
    """A configured size cap was exceeded.

    ``partial`` carries whatever count had been reached when the cap tripped.
    """

    def __init__(self, message: str, partial: int | None = None) -> None:
        super().__init__(message)
        self.partial = partial


class ConsistencyError(CfiForgeError, AssertionError):
    """An internal cross-check failed. Signals a bug or an invalid input action."""
