"""Tabular report emission (CSV and JSON) for every pipeline's results.

Every report is first turned into a `Table`: a kind, a fixed column order,
rows and a small metadata map.  Rendering is a pure function of the table,
so identical input gives byte-identical output.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from typing import IO, Any, Optional, Sequence, Union

from .pgn import BREAKDOWN_COLUMNS, OutcomeBreakdown, breakdown_rows, breakdown_to_dict
from .selfplay import STATS_COLUMNS, CellStats, PreRepetitionSample
from .solver import COMPARISON_COLUMNS, GameGraph, RuleComparison
from .stats import PreRepetitionSummary, WinModel, win_probability

FORMATS = ("csv", "json")


class UnknownFormatError(ValueError):
    pass


class ReportWriteError(OSError):
    pass


@dataclass
class Table:
    kind: str
    columns: list[str]
    rows: list[dict]
    meta: dict = field(default_factory=dict)

    def to_document(self) -> dict:
        return {
            "kind": self.kind,
            "meta": self.meta,
            "columns": list(self.columns),
            "rows": [{c: row.get(c, "") for c in self.columns} for row in self.rows],
        }

    @classmethod
    def from_document(cls, doc: dict) -> "Table":
        try:
            return cls(str(doc["kind"]), list(doc["columns"]), list(doc["rows"]), dict(doc.get("meta", {})))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"not a report document: missing {exc}") from None


CONVERSION_COLUMNS = ["eval_pawns", "linear", "tanh"]
SUMMARY_COLUMNS = [
    "count",
    "baseline_mean",
    "baseline_sd",
    "comparison_mean",
    "comparison_sd",
    "mean_difference",
    "baseline",
    "comparison",
]
SAMPLE_COLUMNS = ["setup", "depth", "game_index", "ply", "completer", "score", "fen"]


def conversions_table(evals: Sequence[float] = (0.22, 0.25)) -> Table:
    """Both evaluation-to-advantage conversions side by side.  Neither is calibrated."""
    rows = [
        {
            "eval_pawns": e,
            "linear": win_probability(e, WinModel.LINEAR),
            "tanh": win_probability(e, WinModel.TANH),
        }
        for e in evals
    ]
    return Table("conversions", CONVERSION_COLUMNS, rows, {"models": ["linear", "tanh"]})


def to_table(data: Any, graph: Optional[GameGraph] = None) -> Table:
    if isinstance(data, Table):
        return data
    if isinstance(data, OutcomeBreakdown):
        meta = {k: v for k, v in breakdown_to_dict(data).items() if k not in ("rows", "panels")}
        return Table("breakdown", list(BREAKDOWN_COLUMNS), breakdown_rows(data), meta)
    if isinstance(data, RuleComparison):
        if graph is None:
            raise ValueError("a rule comparison needs its graph")
        return Table("comparison", list(COMPARISON_COLUMNS), data.rows(graph), {"changes": data.counts()})
    if isinstance(data, tuple) and len(data) == 2 and isinstance(data[1], RuleComparison):
        return to_table(data[1], data[0])
    if isinstance(data, PreRepetitionSummary):
        return Table("pre_repetition_summary", SUMMARY_COLUMNS, [data.to_dict()])
    if isinstance(data, dict) and "kind" in data:
        return Table.from_document(data)
    if isinstance(data, (list, tuple)):
        items = list(data)
        if all(isinstance(x, CellStats) for x in items):
            return Table("stats", list(STATS_COLUMNS), [c.to_row() for c in items])
        if all(isinstance(x, PreRepetitionSample) for x in items):
            rows = [
                {
                    "setup": s.setup_id,
                    "depth": s.depth,
                    "game_index": s.game_index,
                    "ply": s.ply,
                    "completer": "White" if int(s.completer) == 0 else "Black",
                    "score": "" if s.score is None else s.score,
                    "fen": s.position.fen(),
                }
                for s in items
            ]
            return Table("pre_repetition", SAMPLE_COLUMNS, rows)
    raise ValueError(f"cannot build a report from {type(data).__name__}")


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            raise ValueError("non-finite number in report")
        return repr(value)
    return str(value)


def render(table: Table, fmt: str) -> str:
    fmt = fmt.lower()
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
        w.writerow(table.columns)
        for row in table.rows:
            w.writerow([_cell(row.get(c, "")) for c in table.columns])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps(table.to_document(), indent=2, ensure_ascii=False, allow_nan=False) + "\n"
    raise UnknownFormatError(f"unknown report format {fmt!r}; expected one of {', '.join(FORMATS)}")


def emit_report(
    data: Any,
    fmt: str,
    destination: Union[str, os.PathLike, IO[str], None] = None,
    graph: Optional[GameGraph] = None,
) -> str:
    """Render `data` and, when a destination is given, write it there (UTF-8, LF)."""
    text = render(to_table(data, graph), fmt)
    if destination is None:
        return text
    if hasattr(destination, "write"):
        destination.write(text)  # type: ignore[union-attr]
        return text
    try:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ReportWriteError(f"cannot write report to {destination}: {exc.strerror or exc}") from None
    return text


def load_document(path: Union[str, os.PathLike]) -> Table:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not JSON ({exc.msg})") from None
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: not a report document")
    return Table.from_document(doc)
