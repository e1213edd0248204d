"""csv and json renderings of rankings and robustness reports.

json numbers use Python's shortest round-trip repr; csv carries 6-decimal
display columns followed by ``*_exact`` columns at 17 significant digits, so
both formats parse back to the same floats.
"""
from __future__ import annotations

import csv
import io
import json
import math
from typing import Dict, Iterable, List, Optional

from .analysis import RobustnessReport
from .errors import UnknownFormat
from .ranking import JournalScore, RankingResult

OUTPUT_FORMATS = ("csv", "json")
CSV_COLUMNS = ("rank", "id", "name", "eigenfactor", "article_influence", "pi")
CSV_EXACT_COLUMNS = ("eigenfactor_exact", "article_influence_exact", "pi_exact")


def _exact(value: Optional[float]) -> str:
    return "" if value is None else format(value, ".17g")


def _display(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.6f}"


def ranking_metadata(result: RankingResult) -> Dict[str, object]:
    metadata: Dict[str, object] = {
        "alpha": result.alpha,
        "tolerance": result.tolerance,
        "iterations": result.iterations,
        "residual": result.residual,
        "journal_count": result.journal_count,
        "dangling_count": result.dangling_count,
        "eigenfactor_total": math.fsum(record.eigenfactor for record in result.records),
    }
    if result.census_year is not None:
        metadata["census_year"] = result.census_year
    return metadata


def _shown(result: RankingResult, top_n: Optional[int]) -> Iterable[JournalScore]:
    return result.records if top_n is None else result.records[:top_n]


def _comment_lines(metadata: Dict[str, object]) -> List[str]:
    lines = []
    for key, value in metadata.items():
        rendered = _exact(value) if isinstance(value, float) else str(value)
        lines.append(f"# {key}={rendered}\n")
    return lines


def ranking_to_csv(result: RankingResult, top_n: Optional[int] = None) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS + CSV_EXACT_COLUMNS)
    for record in _shown(result, top_n):
        writer.writerow(
            [
                record.rank,
                record.journal_id,
                record.name,
                _display(record.eigenfactor),
                _display(record.article_influence),
                _display(record.pi),
                _exact(record.eigenfactor),
                _exact(record.article_influence),
                _exact(record.pi),
            ]
        )
    buffer.writelines(_comment_lines(ranking_metadata(result)))
    return buffer.getvalue()


def ranking_to_json(result: RankingResult, top_n: Optional[int] = None) -> str:
    payload = {
        "metadata": ranking_metadata(result),
        "journals": [
            {
                "rank": record.rank,
                "id": record.journal_id,
                "name": record.name,
                "eigenfactor": record.eigenfactor,
                "article_influence": record.article_influence,
                "pi": record.pi,
            }
            for record in _shown(result, top_n)
        ],
    }
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def robustness_summary(report: RobustnessReport) -> Dict[str, object]:
    return {
        "trials": report.trials,
        "completed": len(report.correlations),
        "skipped": len(report.skipped),
        "keep_fraction": report.keep_fraction,
        "sample_size": report.sample_size,
        "seed": report.seed,
        "method": report.method,
        "mean": report.mean,
        "min": report.min,
        "max": report.max,
    }


def robustness_to_csv(report: RobustnessReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("trial", "correlation", "skipped_reason"))
    for outcome in report.outcomes:
        writer.writerow((outcome.trial, _exact(outcome.correlation), outcome.skipped_reason or ""))
    summary = {key: ("" if value is None else value) for key, value in robustness_summary(report).items()}
    buffer.writelines(_comment_lines(summary))
    return buffer.getvalue()


def robustness_to_json(report: RobustnessReport) -> str:
    payload = {
        "summary": robustness_summary(report),
        "trials": [
            {"trial": o.trial, "correlation": o.correlation, "skipped_reason": o.skipped_reason}
            for o in report.outcomes
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def render_ranking(result: RankingResult, fmt: str, top_n: Optional[int] = None) -> str:
    if fmt == "csv":
        return ranking_to_csv(result, top_n)
    if fmt == "json":
        return ranking_to_json(result, top_n)
    raise UnknownFormat(fmt, OUTPUT_FORMATS)


def render_robustness(report: RobustnessReport, fmt: str) -> str:
    if fmt == "csv":
        return robustness_to_csv(report)
    if fmt == "json":
        return robustness_to_json(report)
    raise UnknownFormat(fmt, OUTPUT_FORMATS)
