"""Exception taxonomy shared across the package.

Everything raised on purpose derives from TimetokError so callers (and the
CLI) can separate data problems from genuine bugs.
"""

from __future__ import annotations


class TimetokError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(TimetokError):
    """Malformed input text (JSONL line, numeric string, token literal)."""

    def __init__(self, message: str, *, line: int | None = None, offset: int | None = None):
        loc = ""
        if line is not None:
            loc += f" (line {line})"
        if offset is not None:
            loc += f" (offset {offset})"
        super().__init__(message + loc)
        self.line = line
        self.offset = offset


class ValidationError(TimetokError):
    """Well-formed input that violates a documented invariant."""


class DomainError(TimetokError):
    """Value outside the domain an operation accepts (negative, non-finite, out of range)."""


class InvalidDateError(DomainError):
    """Calendar fields that do not name a real instant (e.g. Feb 30, month 13)."""


class TokenError(TimetokError):
    """Bad token input on a decode path: malformed literal, wrong arity, wrong order,
    index out of range, or a decode that lands outside the representable range."""

    def __init__(self, message: str, *, offset: int | None = None):
        super().__init__(message if offset is None else f"{message} (token offset {offset})")
        self.offset = offset


class EmptyInputError(TimetokError):
    """An operation that needs at least one value received none."""


class SpecFileError(TimetokError):
    """Tokenizer spec file cannot be used: schema, version, or checksum problem."""


class VersionMismatchError(SpecFileError):
    pass


class ChecksumMismatchError(SpecFileError):
    pass


class UnitMismatchError(TimetokError):
    """A fitted spec was applied to data in a different time unit."""
