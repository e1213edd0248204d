"""Verification oracle and journal-selection robustness harness."""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from .citation_graph import (
    CitationEdge,
    CrossCitationMatrix,
    JournalRegistry,
    restrict_edges,
)
from .errors import (
    ConfigError,
    InstanceTooLarge,
    LengthMismatch,
    NoInternalCitations,
    SampleTooSmall,
    UnknownFormat,
    ZeroTotalArticles,
)
from .ranking import (
    DEFAULT_ALPHA,
    DampingParameters,
    StationaryVector,
    article_vector,
    compute_rankings,
)

logger = logging.getLogger(__name__)

ORACLE_LIMIT = 64
CORRELATION_METHODS = ("spearman", "kendall")
SEED_LIMIT = 2**64


def dense_oracle(
    matrix: CrossCitationMatrix, registry: JournalRegistry, alpha: float = DEFAULT_ALPHA
) -> Tuple[StationaryVector, np.ndarray]:
    """Brute-force reference: materialise P densely and eigen-decompose it.

    Returns the stationary vector of P and the Eigenfactor scores derived
    from it. Shares no numerical code with :mod:`journal_eigenfactor.ranking`
    apart from the article vector.
    """

    n = matrix.n
    if n > ORACLE_LIMIT:
        raise InstanceTooLarge(n, ORACLE_LIMIT)
    a = article_vector(registry).a

    Z = matrix.toarray()
    column_sums = Z.sum(axis=0)
    H = np.divide(Z, column_sums, out=np.zeros_like(Z), where=column_sums != 0)
    H_prime = H.copy()
    H_prime[:, column_sums == 0] = a[:, None]
    P = alpha * H_prime + (1.0 - alpha) * np.outer(a, np.ones(n))

    eigenvalues, eigenvectors = np.linalg.eig(P)
    leading = int(np.argmin(np.abs(eigenvalues - 1.0)))
    pi = np.real(eigenvectors[:, leading])
    pi = pi / pi.sum()
    pi = np.clip(pi, 0.0, None)
    pi = pi / pi.sum()
    residual = float(np.abs(P @ pi - pi).sum())

    weighted = H @ pi
    if not weighted.sum() > 0:
        raise NoInternalCitations()
    return StationaryVector(pi=pi, iterations=0, residual=residual), 100.0 * (weighted / weighted.sum())


def rank_correlation(
    ranks_a: Sequence[float], ranks_b: Sequence[float], *, method: str = "spearman"
) -> Optional[float]:
    """Rank correlation with average ranks for ties.

    Returns ``None`` when either sequence is constant, since no correlation
    is defined then.
    """

    if method not in CORRELATION_METHODS:
        raise UnknownFormat(method, CORRELATION_METHODS)
    x = np.asarray(ranks_a, dtype=float)
    y = np.asarray(ranks_b, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise LengthMismatch(f"rank sequences differ in length ({x.size} vs {y.size})")
    if x.size < 2:
        raise LengthMismatch(f"need at least 2 ranks, got {x.size}")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        return None
    if method == "kendall":
        value, _ = stats.kendalltau(x, y)
    else:
        value, _ = stats.spearmanr(x, y)
    return float(np.clip(value, -1.0, 1.0))


@dataclass(frozen=True)
class TrialOutcome:
    trial: int
    correlation: Optional[float]
    skipped_reason: Optional[str] = None
    journals: Tuple[str, ...] = ()


@dataclass(frozen=True)
class RobustnessReport:
    """Rank stability of the scores when only part of the journals is kept."""

    trials: int
    keep_fraction: float
    seed: int
    sample_size: int
    method: str
    outcomes: Tuple[TrialOutcome, ...]

    @property
    def correlations(self) -> Tuple[float, ...]:
        return tuple(o.correlation for o in self.outcomes if o.correlation is not None)

    @property
    def skipped(self) -> Tuple[TrialOutcome, ...]:
        return tuple(o for o in self.outcomes if o.correlation is None)

    @property
    def mean(self) -> Optional[float]:
        values = self.correlations
        return float(np.mean(values)) if values else None

    @property
    def min(self) -> Optional[float]:
        values = self.correlations
        return float(min(values)) if values else None

    @property
    def max(self) -> Optional[float]:
        values = self.correlations
        return float(max(values)) if values else None


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent random stream for one trial of a seeded run."""

    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def robustness_harness(
    registry: JournalRegistry,
    edges: Sequence[CitationEdge],
    keep_fraction: float,
    trials: int,
    seed: int,
    *,
    params: DampingParameters = DampingParameters(),
    method: str = "spearman",
    workers: int = 1,
) -> RobustnessReport:
    """Rerank random journal subsets and compare with the full ranking.

    Every trial keeps ``ceil(keep_fraction * n)`` journals drawn uniformly
    without replacement, rebuilds the network on them and correlates the
    subset scores with the full-network scores of the same journals.
    """

    if not 0.0 < keep_fraction <= 1.0:
        raise ConfigError(f"keep fraction must lie in (0, 1], got {keep_fraction}", field="keep_fraction")
    if trials < 1:
        raise ConfigError(f"trials must be at least 1, got {trials}", field="trials")
    if not 0 <= seed < SEED_LIMIT:
        raise ConfigError(f"seed must be a non-negative 64-bit integer, got {seed}", field="seed")
    if method not in CORRELATION_METHODS:
        raise UnknownFormat(method, CORRELATION_METHODS)
    n = len(registry)
    sample_size = math.ceil(keep_fraction * n)
    if sample_size < 2:
        raise SampleTooSmall(sample_size)

    edges = list(edges)
    full = compute_rankings(registry, edges, params).by_id()
    ids = registry.ids

    def run_trial(trial: int) -> TrialOutcome:
        chosen = np.sort(trial_rng(seed, trial).choice(n, size=sample_size, replace=False))
        subset = registry.subset(ids[k] for k in chosen)
        try:
            result = compute_rankings(subset, restrict_edges(edges, subset), params)
        except NoInternalCitations as exc:
            logger.warning("Trial %d skipped: %s", trial, exc)
            return TrialOutcome(trial, None, "no internal citations", subset.ids)
        except ZeroTotalArticles as exc:
            logger.warning("Trial %d skipped: %s", trial, exc)
            return TrialOutcome(trial, None, "no articles", subset.ids)
        subset_scores = result.eigenfactors(subset.ids)
        full_scores = np.array([full[journal_id].eigenfactor for journal_id in subset.ids])
        if np.array_equal(stats.rankdata(full_scores), stats.rankdata(subset_scores)):
            return TrialOutcome(trial, 1.0, journals=subset.ids)
        rho = rank_correlation(full_scores, subset_scores, method=method)
        if rho is None:
            logger.warning("Trial %d skipped: constant scores", trial)
            return TrialOutcome(trial, None, "constant scores", subset.ids)
        return TrialOutcome(trial, rho, journals=subset.ids)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = tuple(pool.map(run_trial, range(trials)))
    else:
        outcomes = tuple(run_trial(trial) for trial in range(trials))

    return RobustnessReport(
        trials=trials,
        keep_fraction=keep_fraction,
        seed=seed,
        sample_size=sample_size,
        method=method,
        outcomes=outcomes,
    )


def citations_per_article(registry: JournalRegistry, edges: Iterable[CitationEdge]) -> Dict[str, Optional[float]]:
    """Plain count of non-self citations received per article, unweighted by source."""

    received = {journal.id: 0.0 for journal in registry}
    for edge in edges:
        if edge.citing == edge.cited or edge.cited not in received or edge.citing not in received:
            continue
        received[edge.cited] += edge.count
    return {
        journal.id: received[journal.id] / journal.articles if journal.articles > 0 else None
        for journal in registry
    }

