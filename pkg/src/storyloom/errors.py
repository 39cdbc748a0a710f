"""Exception taxonomy for the service.

Every error the HTTP layer has to map onto a status code lives here, so the
API module can translate exceptions mechanically instead of string-matching.
"""

from __future__ import annotations


class StoryloomError(Exception):
    """Base class for all domain errors."""


class ValidationError(StoryloomError):
    """Caller supplied input that violates a precondition or invariant."""


class UnknownGenreError(ValidationError):
    """Genre id not in the configured catalog. Carries the valid ids."""

    def __init__(self, genre: str, valid: list[str]):
        super().__init__(f"unknown genre {genre!r}; valid genres: {', '.join(valid)}")
        self.genre = genre
        self.valid = valid


class NotFoundError(StoryloomError):
    """Referenced session/segment/record does not exist."""


class SequencingError(StoryloomError):
    """Operation called in a state where it is not allowed."""


class SessionBusyError(StoryloomError):
    """Another mutating operation on the same session is in flight."""


class ProviderError(StoryloomError):
    """Base for text-generation provider failures."""


class ProviderUnavailableError(ProviderError):
    """Transient provider failure that survived all retry attempts."""

    def __init__(self, message: str, attempts: int = 0):
        super().__init__(message)
        self.attempts = attempts


class ProviderConfigError(ProviderError):
    """Non-retriable provider problem: bad credentials, missing binding."""


class StructuredOutputError(ProviderError):
    """Provider text could not be parsed into the required structure after
    the allowed number of re-prompts."""

    def __init__(self, message: str, attempts: int = 0):
        super().__init__(message)
        self.attempts = attempts


class StorageError(StoryloomError):
    """The backing store failed; state may not be durable."""


class IntegrityError(StorageError):
    """A persisted event stream is corrupt. Names the first bad sequence."""

    def __init__(self, session_id: str, sequence: int, reason: str):
        super().__init__(f"event stream for {session_id} broken at sequence {sequence}: {reason}")
        self.session_id = session_id
        self.sequence = sequence
