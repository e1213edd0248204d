import csv
import io
import json
import logging

import networkx as nx
import numpy as np
import pytest

from journal_eigenfactor import cli
from journal_eigenfactor.analysis import dense_oracle
from journal_eigenfactor.citation_graph import build_cross_citation_matrix, read_edges, read_journals

from .test_citation_graph import _write_edges, _write_journals

SYMMETRIC_JOURNALS = [("A", "Journal A", 20), ("B", "Journal B", 20)]
SYMMETRIC_EDGES = [("A", "B", 6), ("B", "A", 6)]

TRIANGLE_JOURNALS = [("A", "Journal A", 10), ("B", "Journal B", 10), ("C", "Journal C", 10)]
TRIANGLE_EDGES = [("B", "A", 2), ("C", "A", 1), ("A", "B", 1), ("C", "B", 1), ("A", "C", 1), ("B", "C", 2)]

SKEWED_JOURNALS = [("A", "Journal A", 5), ("B", "Journal B", 50), ("C", "Journal C", 12), ("D", "Journal D", 1)]
SKEWED_EDGES = [("A", "B", 9), ("B", "C", 1), ("C", "A", 4), ("C", "B", 2), ("A", "C", 1)]


def _paths(tmp_path, journals, edges):
    return [
        "--journals",
        str(_write_journals(tmp_path, journals)),
        "--edges",
        str(_write_edges(tmp_path, edges)),
    ]


def _csv_rows(text):
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_compute_symmetric_fixture(tmp_path, capsys):
    status = cli.main(["compute", *_paths(tmp_path, SYMMETRIC_JOURNALS, SYMMETRIC_EDGES)])

    assert status == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].startswith("rank,id,name,eigenfactor,article_influence,pi")
    rows = _csv_rows(out)
    assert [row["id"] for row in rows] == ["A", "B"]
    assert [row["eigenfactor"] for row in rows] == ["50.000000", "50.000000"]
    assert [float(row["article_influence_exact"]) for row in rows] == pytest.approx([1.0, 1.0], abs=1e-12)
    assert "# alpha=0.84999999999999998" in out


def test_csv_and_json_carry_identical_numbers(tmp_path, capsys):
    args = _paths(tmp_path, SKEWED_JOURNALS, SKEWED_EDGES)

    assert cli.main(["compute", *args, "--format", "csv"]) == 0
    rows = _csv_rows(capsys.readouterr().out)
    assert cli.main(["compute", *args, "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)

    for row, journal in zip(rows, payload["journals"]):
        assert row["id"] == journal["id"]
        assert float(row["eigenfactor_exact"]) == journal["eigenfactor"]
        assert float(row["pi_exact"]) == journal["pi"]
        assert float(row["article_influence_exact"]) == journal["article_influence"]


def test_top_limits_display_only(tmp_path, capsys):
    args = _paths(tmp_path, SKEWED_JOURNALS, SKEWED_EDGES)

    assert cli.main(["compute", *args, "--format", "json", "--top", "1", "--census-year", "2020"]) == 0
    payload = json.loads(capsys.readouterr().out)

    assert len(payload["journals"]) == 1
    assert payload["journals"][0]["rank"] == 1
    assert payload["metadata"]["journal_count"] == 4
    assert payload["metadata"]["eigenfactor_total"] == pytest.approx(100.0, abs=1e-9)
    assert payload["metadata"]["census_year"] == 2020
    assert payload["metadata"]["dangling_count"] == 1


def test_only_self_citations_exit_3(tmp_path, caplog):
    journals = [("A", "Journal A", 3), ("B", "Journal B", 4)]
    status = cli.main(["compute", *_paths(tmp_path, journals, [("A", "A", 12)])])

    assert status == 3
    assert "ranking failed" in caplog.text


def test_no_convergence_exit_2(tmp_path):
    args = _paths(tmp_path, SKEWED_JOURNALS, SKEWED_EDGES)
    assert cli.main(["compute", *args, "--max-iter", "1"]) == 2


def test_unknown_journal_exit_1(tmp_path, caplog):
    args = _paths(tmp_path, SYMMETRIC_JOURNALS, [("A", "Q", 1)])

    assert cli.main(["compute", *args]) == 1
    assert cli.main(["validate", *args]) == 1
    assert "'Q'" in caplog.text


def test_malformed_file_names_line(tmp_path, caplog):
    args = _paths(tmp_path, [("A", "Journal A", "x")], [])

    assert cli.main(["validate", *args]) == 1
    assert "journals.csv:2" in caplog.text
    assert "ingestion failed" in caplog.text


def test_bad_settings_exit_1(tmp_path):
    args = _paths(tmp_path, SYMMETRIC_JOURNALS, SYMMETRIC_EDGES)

    assert cli.main(["compute", *args, "--alpha", "1.0"]) == 1
    assert cli.main(["compute", *args, "--tol", "0"]) == 1
    assert cli.main(["compute", "--journals", str(tmp_path / "missing.csv"), "--edges", args[3]]) == 1


def test_usage_errors_exit_1(tmp_path):
    with pytest.raises(SystemExit) as excinfo:
        cli.main(["compute"])
    assert excinfo.value.code == 1

    with pytest.raises(SystemExit) as excinfo:
        cli.main(["rank-everything", *_paths(tmp_path, SYMMETRIC_JOURNALS, SYMMETRIC_EDGES)])
    assert excinfo.value.code == 1


def test_validate_reports_counts(tmp_path, caplog):
    caplog.set_level(logging.INFO)
    journals = SYMMETRIC_JOURNALS + [("C", "Journal C", 1)]
    edges = [("A", "B", 3), ("A", "A", 4)]

    assert cli.main(["validate", *_paths(tmp_path, journals, edges)]) == 0
    assert "Journals: 3" in caplog.text
    assert "2 edges" in caplog.text
    assert "Dropped self-citation mass: 4" in caplog.text
    assert "Dangling columns: 2" in caplog.text
    assert "Isolated journals: 1" in caplog.text


def test_validate_empty_edges(tmp_path, caplog):
    caplog.set_level(logging.INFO)
    assert cli.main(["validate", *_paths(tmp_path, SYMMETRIC_JOURNALS, [])]) == 0
    assert "0 edges" in caplog.text


def test_robustness_full_sample(tmp_path, capsys):
    args = _paths(tmp_path, SKEWED_JOURNALS, SKEWED_EDGES)

    status = cli.main(["robustness", *args, "--keep-fraction", "1.0", "--trials", "3", "--format", "json"])

    assert status == 0
    summary = json.loads(capsys.readouterr().out)["summary"]
    assert summary["mean"] == 1.0
    assert summary["completed"] == 3


def test_robustness_zero_trials_is_usage_error(tmp_path):
    args = _paths(tmp_path, SKEWED_JOURNALS, SKEWED_EDGES)
    assert cli.main(["robustness", *args, "--trials", "0"]) == 1


def test_robustness_report_is_reproducible(tmp_path, capsys):
    args = _paths(tmp_path, SKEWED_JOURNALS, SKEWED_EDGES)
    run = ["robustness", *args, "--keep-fraction", "0.75", "--trials", "10", "--seed", "42"]

    assert cli.main(run) == 0
    first = capsys.readouterr().out
    assert cli.main(run) == 0
    assert capsys.readouterr().out == first
    assert first.splitlines()[0] == "trial,correlation,skipped_reason"


def test_export_graphml(tmp_path):
    out = tmp_path / "flow.graphml"
    args = _paths(tmp_path, SYMMETRIC_JOURNALS, SYMMETRIC_EDGES)

    assert cli.main(["export-graph", *args, "--out", str(out)]) == 0

    graph = nx.read_graphml(out)
    assert graph.number_of_nodes() == 2
    assert graph.nodes["A"]["size"] == pytest.approx(50.0)
    assert graph.edges["A", "B"]["weight"] == 1.0


def test_export_dot_with_threshold(tmp_path, capsys):
    args = _paths(tmp_path, SYMMETRIC_JOURNALS, SYMMETRIC_EDGES)

    assert cli.main(["export-graph", *args, "--graph-format", "dot", "--edge-threshold", "1.1"]) == 0
    out = capsys.readouterr().out
    assert out.count("[label=") == 2
    assert "->" not in out


def test_export_graph_node_sizes_match_oracle(tmp_path):
    out = tmp_path / "triangle.graphml"
    args = _paths(tmp_path, TRIANGLE_JOURNALS, TRIANGLE_EDGES)

    assert cli.main(["export-graph", *args, "--out", str(out)]) == 0

    registry = read_journals(tmp_path / "journals.csv")
    _, expected = dense_oracle(build_cross_citation_matrix(registry, read_edges(tmp_path / "edges.csv")), registry)
    graph = nx.read_graphml(out)
    sizes = np.array([graph.nodes[journal_id]["size"] for journal_id in registry.ids])
    assert np.allclose(sizes, expected, atol=1e-9, rtol=0)


def test_compute_matches_oracle(tmp_path, capsys):
    args = _paths(tmp_path, SKEWED_JOURNALS, SKEWED_EDGES)

    assert cli.main(["compute", *args, "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)

    registry = read_journals(tmp_path / "journals.csv")
    _, expected = dense_oracle(build_cross_citation_matrix(registry, read_edges(tmp_path / "edges.csv")), registry)
    emitted = {journal["id"]: journal["eigenfactor"] for journal in payload["journals"]}
    assert np.allclose([emitted[j] for j in registry.ids], expected, atol=1e-9, rtol=0)


def test_compute_output_is_byte_identical(tmp_path):
    args = _paths(tmp_path, SKEWED_JOURNALS, SKEWED_EDGES)
    first, second = tmp_path / "run1" / "out.csv", tmp_path / "run2" / "out.csv"

    assert cli.main(["compute", *args, "--out", str(first)]) == 0
    assert cli.main(["compute", *args, "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_self_citations_leave_output_unchanged(tmp_path, capsys):
    plain = tmp_path / "plain"
    padded = tmp_path / "padded"
    plain.mkdir()
    padded.mkdir()
    diagonal = [(journal_id, journal_id, 1000 + k) for k, (journal_id, _, _) in enumerate(SKEWED_JOURNALS)]

    assert cli.main(["compute", *_paths(plain, SKEWED_JOURNALS, SKEWED_EDGES)]) == 0
    expected = capsys.readouterr().out
    assert cli.main(["compute", *_paths(padded, SKEWED_JOURNALS, diagonal + SKEWED_EDGES)]) == 0
    assert capsys.readouterr().out == expected


def test_undecodable_edges_file_exit_1(tmp_path, caplog):
    journals = _write_journals(tmp_path, SYMMETRIC_JOURNALS)
    edges = tmp_path / "edges.csv"
    edges.write_bytes(b"citing,cited,count\nA,B,3\n\xff\xfe,A,1\n")

    assert cli.main(["validate", "--journals", str(journals), "--edges", str(edges)]) == 1
    assert "edges.csv:3" in caplog.text
    assert "not valid UTF-8" in caplog.text


def test_journals_file_with_byte_order_mark(tmp_path, capsys):
    args = _paths(tmp_path, SYMMETRIC_JOURNALS, SYMMETRIC_EDGES)
    journals = tmp_path / "journals.csv"
    journals.write_text(journals.read_text(encoding="utf-8"), encoding="utf-8-sig")

    assert cli.main(["compute", *args]) == 0
    assert [row["id"] for row in _csv_rows(capsys.readouterr().out)] == ["A", "B"]


def test_negative_seed_exit_1(tmp_path, caplog):
    args = _paths(tmp_path, SKEWED_JOURNALS, SKEWED_EDGES)

    assert cli.main(["robustness", *args, "--seed", "-1", "--trials", "2"]) == 1
    assert cli.main(["robustness", *args, "--seed", str(2**64), "--trials", "2"]) == 1
    assert "seed" in caplog.text
