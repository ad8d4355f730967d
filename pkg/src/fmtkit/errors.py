"""Exception hierarchy shared by every fmtkit module."""

from __future__ import annotations


class FmtkitError(Exception):
    """Base class for all errors raised by fmtkit."""


class FormulaSyntaxError(FmtkitError):
    """Raised when formula or signature source text does not parse.

    ``position`` is the 1-based column of the offending token (end of input
    counts as ``len(text) + 1``).
    """

    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text


class SignatureError(FmtkitError):
    """Undeclared symbol, arity mismatch or name clash."""


class EvaluationError(FmtkitError):
    """Formula cannot be evaluated in the given structure/assignment."""


class StructureError(FmtkitError):
    """A finite structure is malformed or does not match its signature."""


class PreconditionError(FmtkitError):
    """An operation's documented precondition is violated."""


class InvalidCodeError(FmtkitError):
    """A code is not a well-founded extensional pointed relation.

    ``clauses`` lists the names of the failed validity clauses.
    """

    def __init__(self, message: str, clauses: tuple[str, ...] = ()):
        super().__init__(message)
        self.clauses = clauses


class ResourceError(FmtkitError):
    """A configured size cap or search budget would be exceeded."""
