"""Command line interface for Eigenfactor rankings."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

from .analysis import CORRELATION_METHODS
from .errors import EigenfactorError, NoConvergence, NoInternalCitations
from .graph_export import GRAPH_FORMATS, CitationGraphBuilder
from .output import OUTPUT_FORMATS, render_ranking, render_robustness
from .pipeline import EigenfactorRun, RunConfig, log_summary, ranking_lines
from .ranking import DEFAULT_ALPHA, DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE

logging.basicConfig(level=logging.INFO, format="%(message)s")
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NO_CONVERGENCE = 2
EXIT_NO_INTERNAL_CITATIONS = 3

COMMANDS = ("compute", "validate", "robustness", "export-graph")


class _ArgumentParser(argparse.ArgumentParser):
    # Exit status 2 belongs to NoConvergence.
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="journal-eigenfactor",
        description="Compute Eigenfactor and Article Influence scores from a journal citation edge list",
    )
    parser.add_argument("command", choices=COMMANDS, help="Operation to perform")
    parser.add_argument("--journals", type=Path, required=True, help="Journals file with header id,name,articles")
    parser.add_argument("--edges", type=Path, required=True, help="Edges file with header citing,cited,count")
    parser.add_argument("--alpha", type=float, default=DEFAULT_ALPHA, help="Damping factor (default: %(default)s)")
    parser.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE, help="L1 convergence tolerance (default: %(default)s)")
    parser.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITERATIONS, help="Power iteration limit (default: %(default)s)")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default="csv", help="Output format for compute and robustness")
    parser.add_argument("--top", type=int, default=None, help="Only display the N best ranked journals")
    parser.add_argument("--out", type=Path, default=None, help="Write output to this file instead of standard output")
    parser.add_argument("--census-year", type=int, default=None, help="Year the citations were counted in (label only)")
    parser.add_argument("--seed", type=int, default=0, help="Seed for the robustness resampling (default: %(default)s)")
    parser.add_argument("--keep-fraction", type=float, default=0.8, help="Share of journals kept per robustness trial (default: %(default)s)")
    parser.add_argument("--trials", type=int, default=50, help="Number of robustness trials (default: %(default)s)")
    parser.add_argument("--method", choices=CORRELATION_METHODS, default="spearman", help="Rank correlation statistic")
    parser.add_argument("--workers", type=int, default=1, help="Threads used for robustness trials")
    parser.add_argument("--graph-format", choices=GRAPH_FORMATS, default="graphml", help="Graph export format")
    parser.add_argument("--edge-threshold", type=float, default=0.0, help="Omit graph edges whose citation share is below this value")
    parser.add_argument("--focus", default=None, help="Export only this journal and its direct citation neighbours")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    stage = "configuration"
    try:
        config = RunConfig(
            journals_path=args.journals,
            edges_path=args.edges,
            alpha=args.alpha,
            tolerance=args.tol,
            max_iterations=args.max_iter,
            output_format=args.format,
            top_n=args.top,
            census_year=args.census_year,
        )
        run = EigenfactorRun(config)
        stage = "ingestion"
        run.load_inputs()

        if args.command == "validate":
            stage = "validation"
            log_summary(run.validate())
            return EXIT_OK
        if args.command == "compute":
            stage = "ranking"
            result = run.compute()
            for line in ranking_lines(result):
                logger.info(line)
            _emit(render_ranking(result, config.output_format, config.top_n), args.out)
            return EXIT_OK
        if args.command == "robustness":
            stage = "robustness"
            report = run.robustness(
                args.keep_fraction, args.trials, args.seed, method=args.method, workers=args.workers
            )
            _emit(render_robustness(report, config.output_format), args.out)
            return EXIT_OK
        if args.command == "export-graph":
            stage = "graph export"
            graph = run.citation_graph(threshold=args.edge_threshold, focus=args.focus)
            _emit(CitationGraphBuilder.serialize(graph, args.graph_format), args.out)
            return EXIT_OK
    except NoConvergence as exc:
        logger.error("%s failed: %s", stage, exc)
        return EXIT_NO_CONVERGENCE
    except NoInternalCitations as exc:
        logger.error("%s failed: %s", stage, exc)
        return EXIT_NO_INTERNAL_CITATIONS
    except EigenfactorError as exc:
        logger.error("%s failed: %s", stage, exc)
        return EXIT_INPUT
    except KeyboardInterrupt:
        logger.info("Stopped by user")
        return EXIT_INPUT
    parser.error(f"Unknown command {args.command}")
    return EXIT_INPUT


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    logger.info("Wrote %s", out)


if __name__ == "__main__":
    raise SystemExit(main())
