"""Export the journal citation network for external graph viewers."""
from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Callable, Dict, Optional

import networkx as nx

from .errors import UnknownFormat, UnknownJournal
from .ranking import NormalizedMatrix, RankingResult

logger = logging.getLogger(__name__)

GRAPH_FORMATS = ("dot", "graphml")


class CitationGraphBuilder:
    """Build a weighted citation-flow graph from a ranking.

    Nodes carry the Eigenfactor score as their ``size`` attribute; an edge
    ``j -> i`` carries ``H[i, j]``, the share of ``j``'s citations that go
    to ``i``.
    """

    def __init__(self, threshold: float = 0.0, focus: Optional[str] = None) -> None:
        self.threshold = threshold
        self.focus = focus

    def build(self, result: RankingResult, normalized: NormalizedMatrix, journal_ids) -> nx.DiGraph:
        ids = tuple(journal_ids)
        records = result.by_id()
        if self.focus is not None and self.focus not in records:
            raise UnknownJournal(self.focus, "focus")

        graph = nx.DiGraph(name="citation-flow", alpha=result.alpha)
        for journal_id in ids:
            record = records[journal_id]
            attrs = {
                "label": record.name,
                "eigenfactor": record.eigenfactor,
                "size": record.eigenfactor,
                "pi": record.pi,
                "ranking": record.rank,
            }
            if record.article_influence is not None:
                attrs["article_influence"] = record.article_influence
            graph.add_node(journal_id, **attrs)

        H = normalized.H.tocoo()
        for i, j, weight in sorted(zip(H.row.tolist(), H.col.tolist(), H.data.tolist()), key=lambda e: (e[1], e[0])):
            if weight < self.threshold:
                continue
            citing, cited = ids[j], ids[i]
            if self.focus is not None and self.focus not in (citing, cited):
                continue
            graph.add_edge(citing, cited, weight=weight)

        if self.focus is not None:
            keep = {self.focus} | set(graph.predecessors(self.focus)) | set(graph.successors(self.focus))
            graph.remove_nodes_from([node for node in list(graph.nodes) if node not in keep])
        logger.debug("Citation graph has %d nodes and %d edges", graph.number_of_nodes(), graph.number_of_edges())
        return graph

    @staticmethod
    def to_graphml(graph: nx.DiGraph) -> str:
        return "\n".join(nx.generate_graphml(graph)) + "\n"

    @staticmethod
    def to_dot(graph: nx.DiGraph) -> str:
        lines = ["digraph citations {"]
        for node, attrs in graph.nodes(data=True):
            node_attrs = dict(attrs)
            node_attrs["width"] = node_attrs["height"] = _node_inches(attrs["size"])
            lines.append(f"  {_quote(node)} [{_dot_attrs(node_attrs)}];")
        for citing, cited, attrs in graph.edges(data=True):
            edge_attrs = dict(attrs)
            edge_attrs["penwidth"] = 1.0 + 4.0 * attrs["weight"]
            lines.append(f"  {_quote(citing)} -> {_quote(cited)} [{_dot_attrs(edge_attrs)}];")
        lines.append("}")
        return "\n".join(lines) + "\n"

    @classmethod
    def serialize(cls, graph: nx.DiGraph, fmt: str) -> str:
        writers: Dict[str, Callable[[nx.DiGraph], str]] = {"graphml": cls.to_graphml, "dot": cls.to_dot}
        try:
            writer = writers[fmt]
        except KeyError:
            raise UnknownFormat(fmt, writers) from None
        return writer(graph)

    @classmethod
    def write(cls, graph: nx.DiGraph, output: Path, fmt: str) -> None:
        text = cls.serialize(graph, fmt)
        output.parent.mkdir(parents=True, exist_ok=True)
        output.write_text(text, encoding="utf-8")


def _node_inches(size: float) -> float:
    # Node area grows with the score; 100 maps to 2.25 inches across.
    return 0.25 + 0.2 * math.sqrt(max(size, 0.0))


def _quote(value: object) -> str:
    text = str(value).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{text}"'


def _dot_attrs(attrs: Dict[str, object]) -> str:
    parts = []
    for key, value in attrs.items():
        if isinstance(value, float):
            rendered = repr(value)
        elif isinstance(value, int) and not isinstance(value, bool):
            rendered = str(value)
        else:
            rendered = _quote(value)
        parts.append(f"{key}={rendered}")
    return ", ".join(parts)
