"""
Exceptions raised by the engine and the exit codes run.py maps them to.

  2  parse error (bad document, unit ideal, vertex out of range, n > 24, bad field)
  3  resource bound exceeded
  4  internal invariant failure (engine bug)
  5  a checked implication failed on some input
"""


class LyutabError(Exception):
    """Base class for every error the CLI knows how to report."""

    exit_code = 1


class ParseError(LyutabError, ValueError):
    """Input document or command-line value could not be turned into a valid object."""

    exit_code = 2


class ComplexError(LyutabError, ValueError):
    """Precondition of a complex/ideal operation violated (void complex, face not in complex, ...)."""

    exit_code = 2


class ResourceBoundError(LyutabError):
    """Input is legal but larger than the configured computation bound."""

    exit_code = 3


class InvariantError(LyutabError):
    """A structural invariant failed (d^2 != 0, non-commuting squares, bad table shape)."""

    exit_code = 4


class ImplicationFailure(LyutabError):
    """A verified implication failed. `state` holds everything needed to reproduce it."""

    exit_code = 5

    def __init__(self, message: str, state: dict | None = None):
        super().__init__(message)
        self.state = state or {}


class CacheError(LyutabError, OSError):
    """Cache entry unreadable, unwritable or corrupted. Always downgraded to a warning."""
