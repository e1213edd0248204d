"""Ingest journal metadata and citation edges and build the cross-citation matrix.

Two delimiter-separated text files describe a citation network:

``journals``
    header ``id,name,articles``; one journal per row, ``articles`` being the
    number of articles the journal published in the five-year window.
``edges``
    header ``citing,cited,count``; one edge per row, ``count`` being the
    number of citations from ``citing`` (in the census year) to articles
    that ``cited`` published in the window.

The matrix built from them follows the usual column convention: entry
``(i, j)`` counts citations *from* journal ``j`` *to* journal ``i``.
Self-citations never enter the matrix.
"""
from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse

from .errors import (
    DuplicateJournalId,
    MalformedEdge,
    MalformedRow,
    NegativeArticleCount,
    UnknownJournal,
)

logger = logging.getLogger(__name__)

JOURNAL_COLUMNS = ("id", "name", "articles")
EDGE_COLUMNS = ("citing", "cited", "count")

Row = Union[Mapping[str, object], Sequence[object]]


@dataclass(frozen=True)
class Journal:
    """A source journal and its article count over the five-year window."""

    id: str
    name: str
    articles: int


@dataclass(frozen=True)
class CitationEdge:
    """Citations from ``citing`` to ``cited``, aggregated over the window."""

    citing: str
    cited: str
    count: float


@dataclass(frozen=True)
class JournalRegistry:
    """Ordered set of journals; positions follow input order."""

    journals: Tuple[Journal, ...] = ()
    index: Mapping[str, int] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if not self.index and self.journals:
            object.__setattr__(self, "index", {j.id: pos for pos, j in enumerate(self.journals)})

    def __len__(self) -> int:
        return len(self.journals)

    def __iter__(self) -> Iterator[Journal]:
        return iter(self.journals)

    def __contains__(self, journal_id: object) -> bool:
        return journal_id in self.index

    @property
    def ids(self) -> Tuple[str, ...]:
        return tuple(j.id for j in self.journals)

    def position(self, journal_id: str) -> int:
        try:
            return self.index[journal_id]
        except KeyError:
            raise UnknownJournal(journal_id) from None

    def subset(self, ids: Iterable[str]) -> "JournalRegistry":
        """Return the registry restricted to ``ids``, keeping this registry's order."""

        wanted = set(ids)
        for journal_id in wanted:
            self.position(journal_id)
        return JournalRegistry(tuple(j for j in self.journals if j.id in wanted))


@dataclass(frozen=True)
class CrossCitationMatrix:
    """Sparse matrix Z over a registry's journals with a zero diagonal."""

    journal_ids: Tuple[str, ...]
    entries: sparse.csc_matrix
    dropped_self_citations: float = 0.0

    @property
    def n(self) -> int:
        return len(self.journal_ids)

    @property
    def total_mass(self) -> float:
        return float(self.entries.sum())

    def column_sums(self) -> np.ndarray:
        return np.asarray(self.entries.sum(axis=0)).ravel()

    def row_sums(self) -> np.ndarray:
        return np.asarray(self.entries.sum(axis=1)).ravel()

    def toarray(self) -> np.ndarray:
        return self.entries.toarray()


@dataclass(frozen=True)
class MatrixValidation:
    """Counts reported by :func:`validate_matrix`."""

    journal_count: int
    dangling: Tuple[str, ...]
    isolated: Tuple[str, ...]
    total_mass: float
    dropped_self_citations: float

    @property
    def dangling_count(self) -> int:
        return len(self.dangling)

    @property
    def isolated_count(self) -> int:
        return len(self.isolated)


# Tabular ingestion -------------------------------------------------------------
def _cells(row: Row, columns: Sequence[str]) -> Tuple[object, ...]:
    if isinstance(row, Mapping):
        return tuple(row.get(column) for column in columns)
    values = tuple(row)
    if len(values) != len(columns):
        raise ValueError(f"expected {len(columns)} fields, got {len(values)}")
    return values


def _parse_int(value: object) -> int:
    if isinstance(value, bool):
        raise ValueError("booleans are not counts")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if not value.is_integer():
            raise ValueError("not an integer")
        return int(value)
    return int(str(value).strip())


def load_registry(
    rows: Iterable[Row],
    *,
    source: Union[str, Path, None] = None,
    first_line: int = 1,
) -> JournalRegistry:
    """Build a :class:`JournalRegistry` from ``(id, name, articles)`` rows.

    ``rows`` may hold mappings keyed by column name or plain sequences.
    ``first_line`` is the line number reported for the first row.
    """

    return _registry_from(enumerate(rows, start=first_line), source)


def _registry_from(numbered: Iterable[Tuple[int, Row]], source: Union[str, Path, None]) -> JournalRegistry:
    journals: List[Journal] = []
    seen: Dict[str, int] = {}
    for line, row in numbered:
        try:
            raw_id, raw_name, raw_articles = _cells(row, JOURNAL_COLUMNS)
        except ValueError as exc:
            raise MalformedRow(str(exc), path=source, line=line) from None
        journal_id = str(raw_id or "").strip()
        if not journal_id:
            raise MalformedRow("journal id is empty", path=source, line=line, field="id")
        if raw_articles is None or str(raw_articles).strip() == "":
            raise MalformedRow("article count is missing", path=source, line=line, field="articles")
        try:
            articles = _parse_int(raw_articles)
        except ValueError:
            raise MalformedRow(
                f"{raw_articles!r} is not an integer", path=source, line=line, field="articles"
            ) from None
        if journal_id in seen:
            raise DuplicateJournalId(journal_id, path=source, line=line)
        if articles < 0:
            raise NegativeArticleCount(journal_id, articles, path=source, line=line)
        seen[journal_id] = len(journals)
        name = str(raw_name).strip() if raw_name not in (None, "") else journal_id
        journals.append(Journal(id=journal_id, name=name, articles=articles))
    return JournalRegistry(tuple(journals), seen)


def parse_edges(
    rows: Iterable[Row],
    *,
    source: Union[str, Path, None] = None,
    first_line: int = 1,
) -> List[CitationEdge]:
    """Parse ``(citing, cited, count)`` rows; counts must be positive integers."""

    return _edges_from(enumerate(rows, start=first_line), source)


def _edges_from(numbered: Iterable[Tuple[int, Row]], source: Union[str, Path, None]) -> List[CitationEdge]:
    edges: List[CitationEdge] = []
    for line, row in numbered:
        try:
            citing, cited, raw_count = _cells(row, EDGE_COLUMNS)
        except ValueError as exc:
            raise MalformedEdge(str(exc), path=source, line=line) from None
        for name, value in (("citing", citing), ("cited", cited)):
            if not str(value or "").strip():
                raise MalformedEdge("journal id is empty", path=source, line=line, field=name)
        try:
            count = _parse_int(raw_count)
        except (TypeError, ValueError):
            raise MalformedEdge(
                f"{raw_count!r} is not an integer", path=source, line=line, field="count"
            ) from None
        if count < 1:
            raise MalformedEdge(
                f"citation count must be positive, got {count}", path=source, line=line, field="count"
            )
        edges.append(CitationEdge(str(citing).strip(), str(cited).strip(), count))
    return edges


def _delimiter_for(path: Path, delimiter: Optional[str]) -> str:
    if delimiter is not None:
        return delimiter
    return "\t" if path.suffix.lower() == ".tsv" else ","


def _decode(path: Path, error: type) -> str:
    raw = path.read_bytes()
    try:
        return raw.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        data = bytes(exc.object)
        line = data.count(b"\n", 0, exc.start) + 1
        raise error(f"byte 0x{data[exc.start]:02x} is not valid UTF-8", path=path, line=line) from None


def _read_table(
    path: Path,
    columns: Sequence[str],
    delimiter: Optional[str],
    error: type = MalformedRow,
) -> Iterator[Tuple[int, Dict[str, str]]]:
    """Yield ``(line number, row)`` for the data rows of a delimited file.

    Files are UTF-8, with or without a byte-order mark.
    """

    text = _decode(path, error)
    reader = csv.DictReader(io.StringIO(text, newline=""), delimiter=_delimiter_for(path, delimiter))
    try:
        header = [name.strip() for name in (reader.fieldnames or [])]
    except csv.Error as exc:
        raise error(str(exc), path=path, line=reader.line_num) from None
    missing = [column for column in columns if column not in header]
    if missing:
        raise error(f"header must contain {','.join(columns)}", path=path, line=1, field=missing[0])
    reader.fieldnames = header
    while True:
        try:
            row = next(reader)
        except StopIteration:
            return
        except csv.Error as exc:
            raise error(str(exc), path=path, line=reader.line_num) from None
        if None in row:
            raise error("too many fields", path=path, line=reader.line_num)
        yield reader.line_num, row


def read_journals(path: Path, *, delimiter: Optional[str] = None) -> JournalRegistry:
    """Load a journals file into a registry."""

    path = Path(path)
    registry = _registry_from(_read_table(path, JOURNAL_COLUMNS, delimiter), path)
    logger.debug("Loaded %d journals from %s", len(registry), path)
    return registry


def read_edges(path: Path, *, delimiter: Optional[str] = None) -> List[CitationEdge]:
    """Load an edges file."""

    path = Path(path)
    edges = _edges_from(_read_table(path, EDGE_COLUMNS, delimiter, MalformedEdge), path)
    logger.debug("Loaded %d edges from %s", len(edges), path)
    return edges


# Matrix construction ------------------------------------------------------------
def restrict_edges(edges: Iterable[CitationEdge], registry: JournalRegistry) -> List[CitationEdge]:
    """Keep the edges whose endpoints both belong to ``registry``."""

    return [edge for edge in edges if edge.citing in registry and edge.cited in registry]


def build_cross_citation_matrix(
    registry: JournalRegistry, edges: Iterable[CitationEdge]
) -> CrossCitationMatrix:
    """Accumulate ``edges`` into Z; self-citations are dropped, repeats add up."""

    n = len(registry)
    rows: List[int] = []
    cols: List[int] = []
    values: List[float] = []
    dropped = 0.0
    for edge in edges:
        if not edge.count > 0:
            raise MalformedEdge(f"citation count must be positive, got {edge.count}", field="count")
        j = _endpoint(registry, edge.citing, "citing")
        i = _endpoint(registry, edge.cited, "cited")
        if i == j:
            dropped += edge.count
            continue
        rows.append(i)
        cols.append(j)
        values.append(float(edge.count))

    entries = sparse.coo_matrix(
        (np.asarray(values, dtype=float), (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
        shape=(n, n),
    ).tocsc()
    entries.sum_duplicates()
    entries.sort_indices()
    if dropped:
        logger.debug("Dropped %s self-citations", dropped)
    return CrossCitationMatrix(journal_ids=registry.ids, entries=entries, dropped_self_citations=dropped)


def _endpoint(registry: JournalRegistry, journal_id: str, role: str) -> int:
    try:
        return registry.index[journal_id]
    except KeyError:
        raise UnknownJournal(journal_id, role) from None


def validate_matrix(matrix: CrossCitationMatrix) -> MatrixValidation:
    """Report dangling columns, isolated journals and citation mass of ``matrix``."""

    col_sums = matrix.column_sums()
    row_sums = matrix.row_sums()
    ids = matrix.journal_ids
    dangling = tuple(ids[j] for j in np.flatnonzero(col_sums == 0))
    isolated = tuple(ids[j] for j in np.flatnonzero((col_sums == 0) & (row_sums == 0)))
    return MatrixValidation(
        journal_count=matrix.n,
        dangling=dangling,
        isolated=isolated,
        total_mass=float(col_sums.sum()),
        dropped_self_citations=matrix.dropped_self_citations,
    )
