"""Eigenfactor and Article Influence scores from a cross-citation matrix.

The computation runs in four steps:

1. ``normalize_columns`` turns Z into the column-stochastic H; columns of
   journals that cite nobody stay zero and are remembered as *dangling*.
2. ``article_vector`` gives each journal its share of all articles.
3. ``patch_dangling`` and ``traversal_apply`` describe the random walk
   ``P = alpha * H' + (1 - alpha) * a e^T`` without ever materialising it.
4. ``leading_eigenvector`` finds the stationary vector by power iteration and
   ``eigenfactor_scores`` projects it through H (not H') to obtain the scores.

All matrix-vector products are single-threaded CSC products from
``scipy.sparse``; their reduction order is fixed, so repeated runs on the
same machine are bit-identical.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse

from .citation_graph import CitationEdge, CrossCitationMatrix, JournalRegistry, build_cross_citation_matrix
from .errors import (
    ConfigError,
    DimensionMismatch,
    NoConvergence,
    NoInternalCitations,
    ZeroTotalArticles,
)

logger = logging.getLogger(__name__)

DEFAULT_ALPHA = 0.85
DEFAULT_TOLERANCE = 1e-12
DEFAULT_MAX_ITERATIONS = 100_000


@dataclass(frozen=True)
class NormalizedMatrix:
    """Column-stochastic H; dangling columns are all zero."""

    H: sparse.csc_matrix
    dangling: FrozenSet[int]

    @property
    def n(self) -> int:
        return self.H.shape[0]

    @property
    def dangling_mask(self) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        mask[sorted(self.dangling)] = True
        return mask


@dataclass(frozen=True)
class ArticleVector:
    a: np.ndarray

    def __len__(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class DampingParameters:
    alpha: float = DEFAULT_ALPHA
    tolerance: float = DEFAULT_TOLERANCE
    max_iterations: int = DEFAULT_MAX_ITERATIONS

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie strictly between 0 and 1, got {self.alpha}", field="alpha")
        if not self.tolerance > 0.0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance}", field="tolerance")
        if self.max_iterations < 1:
            raise ConfigError(
                f"max_iterations must be positive, got {self.max_iterations}", field="max_iterations"
            )


@dataclass(frozen=True)
class PatchedMatrix:
    """H' kept implicit: H plus the dangling set plus the article vector.

    With ``substitute_dangling`` switched off the operator is plain H, which
    leaks the walk mass sitting on dangling journals.
    """

    normalized: NormalizedMatrix
    article_vector: ArticleVector
    substitute_dangling: bool = True

    @property
    def n(self) -> int:
        return self.normalized.n

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.normalized.H @ x
        if self.substitute_dangling and self.normalized.dangling:
            y = y + self.article_vector.a * x[self.normalized.dangling_mask].sum()
        return y

    def toarray(self) -> np.ndarray:
        dense = self.normalized.H.toarray()
        if self.substitute_dangling:
            dense[:, self.normalized.dangling_mask] = self.article_vector.a[:, None]
        return dense


@dataclass(frozen=True)
class StationaryVector:
    pi: np.ndarray
    iterations: int
    residual: float


@dataclass(frozen=True)
class JournalScore:
    journal_id: str
    name: str
    eigenfactor: float
    article_influence: Optional[float]
    pi: float
    rank: int


@dataclass(frozen=True)
class RankingResult:
    """Scores for every journal, ordered by rank, plus run metadata."""

    records: Tuple[JournalScore, ...]
    alpha: float
    tolerance: float
    iterations: int
    residual: float
    dangling_count: int = 0
    census_year: Optional[int] = None

    @property
    def journal_count(self) -> int:
        return len(self.records)

    def by_id(self) -> dict:
        return {record.journal_id: record for record in self.records}

    def eigenfactors(self, ids: Sequence[str]) -> np.ndarray:
        lookup = self.by_id()
        return np.array([lookup[journal_id].eigenfactor for journal_id in ids])


def normalize_columns(matrix: CrossCitationMatrix) -> NormalizedMatrix:
    """Divide each column of Z by its sum; zero-sum columns become dangling."""

    H = matrix.entries.astype(float).tocsc(copy=True)
    H.sum_duplicates()
    H.eliminate_zeros()
    sums = np.asarray(H.sum(axis=0)).ravel()
    H.data /= np.repeat(sums, np.diff(H.indptr))
    dangling = frozenset(int(j) for j in np.flatnonzero(sums == 0))
    return NormalizedMatrix(H=H, dangling=dangling)


def article_vector(registry: JournalRegistry) -> ArticleVector:
    """Each journal's share of the articles published by all journals."""

    counts = np.array([journal.articles for journal in registry], dtype=float)
    total = counts.sum()
    if not total > 0:
        raise ZeroTotalArticles()
    return ArticleVector(counts / total)


def patch_dangling(
    normalized: NormalizedMatrix, a: ArticleVector, *, substitute_dangling: bool = True
) -> PatchedMatrix:
    """Replace the dangling columns of H by ``a`` (implicitly)."""

    if len(a) != normalized.n:
        raise DimensionMismatch(normalized.n, len(a), "article vector")
    return PatchedMatrix(normalized, a, substitute_dangling)


def traversal_apply(h_prime: PatchedMatrix, a: ArticleVector, alpha: float, x: np.ndarray) -> np.ndarray:
    """Return ``P x = alpha * H' x + (1 - alpha) * a * sum(x)``."""

    x = np.asarray(x, dtype=float)
    if x.shape != (h_prime.n,):
        raise DimensionMismatch(h_prime.n, x.size, "probability vector")
    if len(a) != h_prime.n:
        raise DimensionMismatch(h_prime.n, len(a), "article vector")
    return alpha * h_prime.matvec(x) + (1.0 - alpha) * a.a * x.sum()


def leading_eigenvector(
    h_prime: PatchedMatrix, a: ArticleVector, params: DampingParameters = DampingParameters()
) -> StationaryVector:
    """Power iteration from ``a`` until the L1 step falls below the tolerance."""

    if h_prime.n < 1:
        raise DimensionMismatch(1, h_prime.n, "traversal matrix")
    x = a.a.copy()
    residual = float("inf")
    for iteration in range(1, params.max_iterations + 1):
        y = traversal_apply(h_prime, a, params.alpha, x)
        y /= y.sum()
        residual = float(np.abs(y - x).sum())
        x = y
        if residual <= params.tolerance:
            logger.debug("Power iteration converged after %d iterations (residual %.3e)", iteration, residual)
            return StationaryVector(pi=x, iterations=iteration, residual=residual)
    raise NoConvergence(params.max_iterations, residual)


def eigenfactor_scores(normalized: NormalizedMatrix, stationary: StationaryVector) -> np.ndarray:
    """``100 * H pi / sum(H pi)``; dangling journals pass no weight on."""

    weighted = normalized.H @ stationary.pi
    total = weighted.sum()
    if not total > 0:
        raise NoInternalCitations()
    return 100.0 * (weighted / total)


def article_influence(eigenfactor: Sequence[float], a: ArticleVector) -> List[Optional[float]]:
    """``0.01 * EF_i / a_i``; journals without articles get ``None``."""

    if len(eigenfactor) != len(a):
        raise DimensionMismatch(len(a), len(eigenfactor), "eigenfactor vector")
    return [
        0.01 * float(ef) / float(share) if share > 0 else None
        for ef, share in zip(eigenfactor, a.a)
    ]


def rank(journal_ids: Sequence[str], eigenfactor: Sequence[float]) -> List[int]:
    """Dense ranks 1..n by descending score, ties broken by ascending id."""

    order = sorted(range(len(journal_ids)), key=lambda k: (-eigenfactor[k], journal_ids[k]))
    ranks = [0] * len(journal_ids)
    for position, k in enumerate(order, start=1):
        ranks[k] = position
    return ranks


def compute_rankings(
    registry: JournalRegistry,
    edges: Iterable[CitationEdge],
    params: DampingParameters = DampingParameters(),
    *,
    census_year: Optional[int] = None,
) -> RankingResult:
    """Run the whole pipeline from raw edges to ranked scores."""

    matrix = build_cross_citation_matrix(registry, edges)
    return rank_matrix(registry, matrix, params, census_year=census_year)


def rank_matrix(
    registry: JournalRegistry,
    matrix: CrossCitationMatrix,
    params: DampingParameters = DampingParameters(),
    *,
    census_year: Optional[int] = None,
) -> RankingResult:
    if matrix.n != len(registry):
        raise DimensionMismatch(len(registry), matrix.n, "cross-citation matrix")
    normalized = normalize_columns(matrix)
    a = article_vector(registry)
    stationary = leading_eigenvector(patch_dangling(normalized, a), a, params)
    scores = eigenfactor_scores(normalized, stationary)
    influence = article_influence(scores, a)
    ids = registry.ids
    ranks = rank(ids, scores)

    records = sorted(
        (
            JournalScore(
                journal_id=journal.id,
                name=journal.name,
                eigenfactor=float(scores[k]),
                article_influence=influence[k],
                pi=float(stationary.pi[k]),
                rank=ranks[k],
            )
            for k, journal in enumerate(registry)
        ),
        key=lambda record: record.rank,
    )
    return RankingResult(
        records=tuple(records),
        alpha=params.alpha,
        tolerance=params.tolerance,
        iterations=stationary.iterations,
        residual=stationary.residual,
        dangling_count=len(normalized.dangling),
        census_year=census_year,
    )
