import csv
import io
import json
from pathlib import Path

import pytest

from arrchess.core.position import BLACK, WHITE
from arrchess.pgn import ingest
from arrchess.report import (
    ReportWriteError,
    Table,
    UnknownFormatError,
    conversions_table,
    emit_report,
    load_document,
    render,
    to_table,
)
from arrchess.selfplay import STATS_COLUMNS
from arrchess.solver import GameGraph, Value, compare_rules
from arrchess.stats import summarize_pre_repetition

from report_fixtures import stats_fixture

GOLDEN = Path(__file__).parent / "golden"


def test_golden_csv_and_json():
    assert emit_report(stats_fixture(), "csv") == (GOLDEN / "stats_fixture.csv").read_text()
    assert emit_report(stats_fixture(), "json") == (GOLDEN / "stats_fixture.json").read_text()


def test_identical_input_identical_bytes(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_report(stats_fixture(), "csv", a)
    emit_report(stats_fixture(), "CSV", b)
    assert a.read_bytes() == b.read_bytes()
    assert b"\r" not in a.read_bytes()


def test_empty_grid_is_header_only():
    assert emit_report([], "csv") == ",".join(STATS_COLUMNS) + "\n"
    doc = json.loads(emit_report([], "json"))
    assert doc["rows"] == [] and doc["columns"] == list(STATS_COLUMNS)


def test_unknown_format():
    with pytest.raises(UnknownFormatError):
        emit_report(stats_fixture(), "xml")


def test_unwritable_destination(tmp_path):
    with pytest.raises(ReportWriteError):
        emit_report(stats_fixture(), "csv", tmp_path / "missing" / "x.csv")


def test_rfc4180_quoting():
    t = Table("t", ["a", "b"], [{"a": 'say "hi", ok', "b": "line1\nline2"}, {"a": None, "b": True}])
    text = render(t, "csv")
    assert text.startswith('a,b\n"say ""hi"", ok","line1\nline2"\n')
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[1] == ['say "hi", ok', "line1\nline2"]
    assert rows[2] == ["", "true"]


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        render(Table("t", ["x"], [{"x": float("nan")}]), "csv")


def test_breakdown_and_comparison_tables(small_archive):
    data, _ = small_archive
    bd, _, _ = ingest([data], rating_floor=2700)
    t = to_table(bd)
    assert t.kind == "breakdown" and t.meta["rating_floor"] == 2700
    again = load_document_from_text(render(t, "json"))
    assert render(again, "csv") == render(t, "csv")

    g = GameGraph.from_abstract([WHITE, BLACK], {0: [0, 1]}, {1: Value.BLACK_WIN})
    cmp = compare_rules(g)
    t = to_table((g, cmp))
    assert t.kind == "comparison" and t.meta["changes"] == {"Draw->BlackWin": 1}
    assert t.rows[0]["changed"] is True
    with pytest.raises(ValueError):
        to_table(cmp)


def load_document_from_text(text):
    return Table.from_document(json.loads(text))


def test_summary_and_conversions():
    s = summarize_pre_repetition([5.1 - 13.8, 5.1 + 13.8], [3.9 - 13.8, 3.9 + 13.8])
    t = to_table(s)
    assert t.rows[0]["baseline"] == "+5.1 ± 13.8"
    text = render(t, "csv")
    assert "+5.1 ± 13.8" in text
    conv = conversions_table([0.22])
    assert conv.rows[0]["linear"] == pytest.approx(0.055, abs=1e-12)
    assert render(conv, "csv").splitlines()[0] == "eval_pawns,linear,tanh"


def test_load_document_errors(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("[1, 2]")
    with pytest.raises(ValueError):
        load_document(p)
    p.write_text("{not json")
    with pytest.raises(ValueError):
        load_document(p)
    p.write_text('{"kind": "x"}')
    with pytest.raises(ValueError):
        load_document(p)


def test_unsupported_data():
    with pytest.raises(ValueError):
        to_table(42)
