"""Eigenfactor and Article Influence scores for journal citation networks."""

from .analysis import RobustnessReport, citations_per_article, dense_oracle, rank_correlation, robustness_harness
from .citation_graph import (
    CitationEdge,
    CrossCitationMatrix,
    Journal,
    JournalRegistry,
    build_cross_citation_matrix,
    load_registry,
    parse_edges,
    read_edges,
    read_journals,
    validate_matrix,
)
from .graph_export import CitationGraphBuilder
from .pipeline import EigenfactorRun, RunConfig, ValidationSummary, log_summary, summary_lines
from .ranking import (
    DampingParameters,
    RankingResult,
    article_influence,
    article_vector,
    compute_rankings,
    eigenfactor_scores,
    leading_eigenvector,
    normalize_columns,
    patch_dangling,
    rank,
    traversal_apply,
)

__all__ = [
    "CitationEdge",
    "CitationGraphBuilder",
    "CrossCitationMatrix",
    "DampingParameters",
    "EigenfactorRun",
    "Journal",
    "JournalRegistry",
    "RankingResult",
    "RobustnessReport",
    "RunConfig",
    "ValidationSummary",
    "article_influence",
    "article_vector",
    "build_cross_citation_matrix",
    "citations_per_article",
    "compute_rankings",
    "dense_oracle",
    "eigenfactor_scores",
    "leading_eigenvector",
    "load_registry",
    "log_summary",
    "normalize_columns",
    "parse_edges",
    "patch_dangling",
    "rank",
    "rank_correlation",
    "read_edges",
    "read_journals",
    "robustness_harness",
    "summary_lines",
    "traversal_apply",
    "validate_matrix",
]
