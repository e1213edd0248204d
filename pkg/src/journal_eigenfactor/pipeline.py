"""High level orchestration of a ranking run."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Tuple

import networkx as nx

from .analysis import RobustnessReport, robustness_harness
from .citation_graph import (
    CitationEdge,
    CrossCitationMatrix,
    JournalRegistry,
    build_cross_citation_matrix,
    read_edges,
    read_journals,
    validate_matrix,
)
from .errors import ConfigError
from .graph_export import CitationGraphBuilder
from .output import OUTPUT_FORMATS
from .ranking import (
    DEFAULT_ALPHA,
    DEFAULT_MAX_ITERATIONS,
    DEFAULT_TOLERANCE,
    DampingParameters,
    RankingResult,
    normalize_columns,
    rank_matrix,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunConfig:
    """Inputs and numerical settings of one run."""

    journals_path: Path
    edges_path: Path
    alpha: float = DEFAULT_ALPHA
    tolerance: float = DEFAULT_TOLERANCE
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    output_format: str = "csv"
    top_n: Optional[int] = None
    census_year: Optional[int] = None
    delimiter: Optional[str] = None

    def __post_init__(self) -> None:
        for name in ("journals_path", "edges_path"):
            path = Path(getattr(self, name))
            object.__setattr__(self, name, path)
            if not path.is_file():
                raise ConfigError(f"{path} does not exist or is not a file", field=name)
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"output format must be one of {', '.join(OUTPUT_FORMATS)}", field="format")
        if self.top_n is not None and self.top_n < 1:
            raise ConfigError(f"top must be positive, got {self.top_n}", field="top")
        self.params  # raises ConfigError for bad damping settings

    @property
    def params(self) -> DampingParameters:
        return DampingParameters(alpha=self.alpha, tolerance=self.tolerance, max_iterations=self.max_iterations)


@dataclass
class EigenfactorRun:
    config: RunConfig
    _inputs: Optional[Tuple[JournalRegistry, List[CitationEdge]]] = field(default=None, init=False, repr=False)

    def load_inputs(self) -> Tuple[JournalRegistry, List[CitationEdge]]:
        if self._inputs is None:
            registry = read_journals(self.config.journals_path, delimiter=self.config.delimiter)
            edges = read_edges(self.config.edges_path, delimiter=self.config.delimiter)
            self._inputs = (registry, edges)
        return self._inputs

    def matrix(self) -> CrossCitationMatrix:
        registry, edges = self.load_inputs()
        return build_cross_citation_matrix(registry, edges)

    def compute(self) -> RankingResult:
        """Rank the journals of the configured input files."""

        registry, _ = self.load_inputs()
        return rank_matrix(registry, self.matrix(), self.config.params, census_year=self.config.census_year)

    def validate(self) -> "ValidationSummary":
        registry, edges = self.load_inputs()
        report = validate_matrix(self.matrix())
        return ValidationSummary(
            journal_count=len(registry),
            edge_count=len(edges),
            dropped_self_citations=report.dropped_self_citations,
            total_mass=report.total_mass,
            dangling=report.dangling,
            isolated=report.isolated,
        )

    def robustness(
        self,
        keep_fraction: float,
        trials: int,
        seed: int,
        *,
        method: str = "spearman",
        workers: int = 1,
    ) -> RobustnessReport:
        registry, edges = self.load_inputs()
        return robustness_harness(
            registry,
            edges,
            keep_fraction,
            trials,
            seed,
            params=self.config.params,
            method=method,
            workers=workers,
        )

    def citation_graph(self, threshold: float = 0.0, focus: Optional[str] = None) -> nx.DiGraph:
        """Ranked citation-flow graph; edges below ``threshold`` are left out."""

        registry, _ = self.load_inputs()
        matrix = self.matrix()
        result = rank_matrix(registry, matrix, self.config.params, census_year=self.config.census_year)
        builder = CitationGraphBuilder(threshold=threshold, focus=focus)
        return builder.build(result, normalize_columns(matrix), registry.ids)


@dataclass
class ValidationSummary:
    """Facts about the input files gathered without ranking them."""

    journal_count: int
    edge_count: int
    dropped_self_citations: float
    total_mass: float
    dangling: Tuple[str, ...]
    isolated: Tuple[str, ...]

    @property
    def dangling_count(self) -> int:
        return len(self.dangling)

    @property
    def isolated_count(self) -> int:
        return len(self.isolated)


def log_summary(summary: ValidationSummary) -> None:
    """Log the validation report one fact per line at INFO."""

    for line in summary_lines(summary):
        logger.info(line)


def summary_lines(summary: ValidationSummary) -> Iterable[str]:
    """Journal, edge and citation-mass counts, then the dangling and isolated journals."""

    yield f"Journals: {summary.journal_count}"
    yield f"{summary.edge_count} edges"
    yield f"Citation mass: {summary.total_mass:g}"
    yield f"Dropped self-citation mass: {summary.dropped_self_citations:g}"
    yield f"Dangling columns: {summary.dangling_count}"
    if summary.dangling:
        yield f"  • {', '.join(summary.dangling)}"
    yield f"Isolated journals: {summary.isolated_count}"
    if summary.isolated:
        yield f"  • {', '.join(summary.isolated)}"


def ranking_lines(result: RankingResult) -> Iterable[str]:
    yield f"Ranked {result.journal_count} journals (alpha {result.alpha:g})"
    yield f"Converged after {result.iterations} iterations, residual {result.residual:.3e}"
    if result.dangling_count:
        yield f"Dangling journals: {result.dangling_count}"
