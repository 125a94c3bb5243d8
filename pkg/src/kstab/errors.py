"""Exception hierarchy shared by all modules.

The CLI maps these onto distinct exit codes, so computation refusals
(budget), bad input files (parse) and failed geometric validation stay
distinguishable for scripts driving the tool.
"""

from __future__ import annotations


class KstabError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(KstabError):
    """Geometric or combinatorial precondition failed (CLI exit code 2)."""


class BudgetError(KstabError):
    """Enumeration refused because it would exceed the point budget (exit 3)."""


class ParseError(KstabError):
    """Malformed problem file (exit 4); carries a line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FitMismatch(KstabError):
    """An interpolated polynomial failed verification on held-out samples.

    Signals quasi-polynomial behavior (or a wrong degree bound); callers
    may retry on a coarser progression.
    """
