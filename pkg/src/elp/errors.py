"""Exception hierarchy shared by every solver in the package."""

from __future__ import annotations


class ElpError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(ElpError):
    """Raised on malformed program or formula text.

    Attributes:
        line: 1-based line of the offending token.
        column: 1-based column of the offending token.
    """

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class BoundExceeded(ElpError):
    """Raised when an exhaustive search would exceed a configured bound."""

    def __init__(self, bound: str, limit: int, actual: int):
        super().__init__(f"bound {bound}={limit} exceeded (needs {actual})")
        self.bound = bound
        self.limit = limit
        self.actual = actual


class UnsupportedFeature(ElpError):
    """Raised when a construct is not part of the chosen semantics' language."""
