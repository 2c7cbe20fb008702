"""Shared exception types.

Every error raised on purpose by this package derives from JobhamError so
callers (CLI, HTTP layer) can map failures to diagnostics in one place.
"""


class JobhamError(Exception):
    """Base class for all package errors."""

    code = "error"


class InvalidFieldError(JobhamError):
    """A record violates one of its field invariants."""

    code = "invalid-field"

    def __init__(self, field, reason):
        self.field = field
        self.reason = reason
        super().__init__(f"invalid field {field!r}: {reason}")


class NotFoundError(JobhamError):
    """Lookup by id failed."""

    code = "not-found"

    def __init__(self, kind, key):
        self.kind = kind
        self.key = key
        super().__init__(f"{kind} not found: {key!r}")


class DuplicateApplicationError(JobhamError):
    """The applicant already applied to this job. The store is unchanged."""

    code = "duplicate-application"


class StorageError(JobhamError):
    """I/O failure while persisting or loading a collection file."""

    code = "storage-io"


class LexiconError(JobhamError):
    """Skill lexicon file is malformed or inconsistent."""

    code = "lexicon-error"


class VocabularyError(JobhamError):
    """Token vocabulary file is malformed or missing required entries."""

    code = "vocabulary-error"
