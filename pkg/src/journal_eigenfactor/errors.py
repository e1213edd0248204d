"""Exception hierarchy shared by the library and the command line."""
from __future__ import annotations

from pathlib import Path
from typing import Optional, Union


class EigenfactorError(Exception):
    """Base class for every error raised by this package."""


# Ingestion and configuration --------------------------------------------------
class InputError(EigenfactorError):
    """Problem with user supplied files or settings."""


class ParseError(InputError):
    """An input row could not be understood; ``path``, ``line`` and ``field`` locate it."""

    def __init__(
        self,
        message: str,
        *,
        path: Union[str, Path, None] = None,
        line: Optional[int] = None,
        field: Optional[str] = None,
    ) -> None:
        self.path = str(path) if path is not None else "<table>"
        self.line = line
        self.field = field
        self.message = message
        location = self.path if line is None else f"{self.path}:{line}"
        detail = f"field '{field}': {message}" if field else message
        super().__init__(f"{location}: {detail}")


class MalformedRow(ParseError):
    pass


class MalformedEdge(ParseError):
    pass


class DuplicateJournalId(ParseError):
    def __init__(self, journal_id: str, **kwargs) -> None:
        self.journal_id = journal_id
        super().__init__(f"duplicate journal id {journal_id!r}", field="id", **kwargs)


class NegativeArticleCount(ParseError):
    def __init__(self, journal_id: str, count: int, **kwargs) -> None:
        self.journal_id = journal_id
        super().__init__(
            f"journal {journal_id!r} has negative article count {count}", field="articles", **kwargs
        )


class UnknownJournal(InputError):
    def __init__(self, journal_id: str, role: str = "endpoint") -> None:
        self.journal_id = journal_id
        self.role = role
        super().__init__(f"edge {role} {journal_id!r} is not in the journal registry")


class ConfigError(InputError):
    def __init__(self, message: str, *, field: Optional[str] = None) -> None:
        self.field = field
        super().__init__(message)


# Ranking ----------------------------------------------------------------------
class RankingError(EigenfactorError):
    pass


class ZeroTotalArticles(RankingError):
    def __init__(self) -> None:
        super().__init__("every journal reports 0 articles; the article vector is undefined")


class DimensionMismatch(RankingError):
    def __init__(self, expected: int, actual: int, what: str = "vector") -> None:
        self.expected = expected
        self.actual = actual
        super().__init__(f"{what} has dimension {actual}, expected {expected}")


class NoConvergence(RankingError):
    def __init__(self, iterations: int, residual: float) -> None:
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"power iteration did not converge after {iterations} iterations (residual {residual:.3e})"
        )


class NoInternalCitations(RankingError):
    def __init__(self) -> None:
        super().__init__("no citation weight flows between journals; Eigenfactor scores are undefined")


# Analysis ---------------------------------------------------------------------
class AnalysisError(EigenfactorError):
    pass


class InstanceTooLarge(AnalysisError):
    def __init__(self, n: int, limit: int) -> None:
        self.n = n
        self.limit = limit
        super().__init__(f"dense oracle refuses {n} journals (limit {limit})")


class SampleTooSmall(AnalysisError):
    def __init__(self, size: int) -> None:
        self.size = size
        super().__init__(f"journal sample of size {size} is too small; at least 2 journals are needed")


class LengthMismatch(AnalysisError):
    pass


class UnknownFormat(AnalysisError):
    def __init__(self, fmt: str, choices) -> None:
        self.format = fmt
        super().__init__(f"unknown format {fmt!r}; choose from {', '.join(sorted(choices))}")
