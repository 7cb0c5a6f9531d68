"""Exception types shared across the package."""

from __future__ import annotations


class GrcpError(Exception):
    """Base class for library errors."""


class WindowExceeded(GrcpError, ValueError):
    """A degree outside the configured window was requested."""


class PreconditionError(GrcpError, ValueError):
    """An operation's documented precondition does not hold."""


class CapacityError(GrcpError, RuntimeError):
    """A construction would exceed its configured size cap."""


class InconsistencyError(GrcpError, RuntimeError):
    """A computed object contradicts an identity that must hold."""


class UnsupportedInstance(GrcpError, ValueError):
    """The input is valid but outside what the builders support."""


class NotGenerated(GrcpError, ValueError):
    """An arrow cannot be written as a product of the allowed arrows."""

    def __init__(self, arrow, message: str = ""):
        self.arrow = arrow
        super().__init__(message or f"arrow {arrow} is not a product of the given sets")


class ParseError(GrcpError, ValueError):
    """Syntax error with a 1-based line/column position."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        self.message = message
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class SemanticError(ParseError):
    """Well-formed input that describes an invalid object."""
