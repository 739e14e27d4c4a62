"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data error, 3 engine or protocol error.
"""

from __future__ import annotations

import json
import logging
import os
import sys
import tempfile
import time
from pathlib import Path
from typing import Optional

import click

from . import __version__
from .core import perft as core_perft
from .core import divide, parse_fen
from .core.position import FenError
from .engine import ENGINE_ENV, EngineError, default_engine_path, stub_engine_argv
from .pgn import ingest as run_ingest
from .report import FORMATS, ReportWriteError, Table, UnknownFormatError, conversions_table, emit_report, load_document, render
from .selfplay import MatchPlan, collect_pre_repetition, game_log_to_pgn, run_setup_grid
from .solver import BuildLimits, PayoffModel, build_subgame, compare_rules, graph_to_text, solve_payoff

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_ENGINE = 0, 1, 2, 3


class DataError(click.ClickException):
    exit_code = EXIT_DATA


class EngineFailure(click.ClickException):
    exit_code = EXIT_ENGINE


def _out_dir(path: Optional[str]) -> Path:
    p = Path(path or ".")
    try:
        p.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise DataError(f"cannot create output directory {p}: {exc.strerror}") from None
    return p


def _write(path: Path, data, fmt: str, graph=None) -> None:
    try:
        emit_report(data, fmt, path, graph=graph)
    except ReportWriteError as exc:
        raise DataError(str(exc)) from None


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="arrchess")
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def cli(verbose: bool) -> None:
    """Chess tooling for comparing standard and asymmetric repetition scoring."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")


@cli.command()
@click.argument("pgn", nargs=-1, required=True, type=click.Path(dir_okay=False))
@click.option("--rating-floor", type=click.IntRange(min=0), default=None, help="Also report games with both Elos at or above N.")
@click.option("--out", "out", type=click.Path(file_okay=False), default=None, help="Directory for breakdown and error files.")
def ingest(pgn: tuple[str, ...], rating_floor: Optional[int], out: Optional[str]) -> None:
    """Replay PGN archives and tabulate outcomes under both rule sets."""
    handles = []
    try:
        for p in pgn:
            try:
                handles.append(open(p, "rb"))
            except OSError as exc:
                raise DataError(f"cannot read {p}: {exc.strerror}") from None
        t0 = time.perf_counter()
        bd, records, errors = run_ingest(handles, rating_floor)
        elapsed = time.perf_counter() - t0
    finally:
        for h in handles:
            h.close()
    d = _out_dir(out)
    _write(d / "breakdown.csv", bd, "csv")
    _write(d / "breakdown.json", bd, "json")
    err_rows = [{"game": e.index, "ply": "" if e.ply is None else e.ply, "message": e.message} for e in errors]
    _write(d / "errors.csv", Table("errors", ["game", "ply", "message"], err_rows), "csv")
    click.echo(f"{len(records)} games replayed, {len(errors)} rejected, {elapsed:.1f}s")
    for p in bd.panels:
        for rules_name in ("standard", "arr"):
            rc = p.standard if rules_name == "standard" else p.arr
            rates = " ".join(f"{r.value}={rc.rate(r):.3f}" for r in rc.results)
            click.echo(f"  {p.name}/{rules_name}: n={rc.total} {rates}")


_DEFAULT_STUB = {"name": "stub", "policy": "material", "options": ["Hash", "Threads", "Contempt"]}


@cli.command()
@click.option("--config", "config", required=True, type=click.Path(dir_okay=False, exists=True), help="Match plan JSON.")
@click.option("--stub", is_flag=True, help="Use the bundled scripted engine instead of a real one.")
@click.option("--out", "out", type=click.Path(file_okay=False), default=None)
@click.option("--depth", "depths", multiple=True, type=click.IntRange(min=1), help="Base depth(s); default from the plan.")
def selfplay(config: str, stub: bool, out: Optional[str], depths: tuple[int, ...]) -> None:
    """Play the setup grid in Run 1 and Run 2 modes."""
    try:
        with open(config, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read plan {config}: {exc}") from None
    tmp = None
    override = None
    if stub:
        script = data.get("stub_script", _DEFAULT_STUB)
        tmp = tempfile.NamedTemporaryFile("w", suffix=".json", delete=False)
        json.dump(script, tmp)
        tmp.close()
        override = stub_engine_argv(tmp.name)
    else:
        # the environment variable wins over the plan's engine path
        override = default_engine_path()
        eng = data.get("engine") or {}
        if override is None and not (eng if isinstance(eng, str) else eng.get("path")):
            raise click.UsageError(f"no engine configured; set it in the plan or via {ENGINE_ENV}")
    try:
        try:
            plan = MatchPlan.from_json(data, engine_override=override)
        except (ValueError, TypeError) as exc:
            raise DataError(f"bad plan: {exc}") from None
        try:
            logs, stats = run_setup_grid(plan, list(depths) or None)
        except EngineError as exc:
            raise EngineFailure(str(exc)) from None
    finally:
        if tmp is not None:
            os.unlink(tmp.name)
    d = _out_dir(out)
    _write(d / "stats.csv", stats, "csv")
    _write(d / "stats.json", stats, "json")
    _write(d / "pre_repetition.csv", collect_pre_repetition(logs), "csv")
    with open(d / "games.pgn", "w", encoding="utf-8", newline="") as fh:
        for g in logs:
            if g.valid:
                fh.write(game_log_to_pgn(g))
    with open(d / "games.jsonl", "w", encoding="utf-8", newline="") as fh:
        for g in logs:
            fh.write(json.dumps(g.to_dict(), sort_keys=True) + "\n")
    for c in stats:
        click.echo(
            f"{c.setup_id} d{c.depth} {c.mode.value} {c.rules.value}: n={c.games} "
            f"W={c.white_win_rate:.3f} D={c.draw_rate:.3f} B={c.black_win_rate:.3f}"
            + (" ABORTED" if c.aborted else "")
        )
    if logs and not any(g.valid for g in logs):
        raise EngineFailure("no game completed: " + (logs[0].error or "engine failure"))


@cli.command()
@click.option("--root", "root", required=True, help="Root position as FEN.")
@click.option("--limit", type=click.IntRange(min=1), default=10_000, show_default=True, help="Vertex budget.")
@click.option("--model", type=click.Choice(["standard", "arr", "both"]), default="both", show_default=True)
@click.option("--max-pieces", type=click.IntRange(min=2), default=32)
@click.option("--out", "out", type=click.Path(dir_okay=False), default=None, help="Write the per-vertex comparison here.")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="csv", show_default=True)
@click.option("--graph-out", type=click.Path(dir_okay=False), default=None, help="Write the graph in text form.")
def solve(root: str, limit: int, model: str, max_pieces: int, out: Optional[str], fmt: str, graph_out: Optional[str]) -> None:
    """Solve the subgame below ROOT under standard and/or ARR payoffs."""
    try:
        pos = parse_fen(root)
    except (FenError, ValueError) as exc:
        raise DataError(f"bad FEN: {exc}") from None
    g = build_subgame(pos, BuildLimits(max_vertices=limit, max_pieces=max_pieces))
    click.echo(f"vertices={g.size} edges={g.edge_count} terminal={len(g.terminal)} unknown={len(g.unknown)}" + (" (budget exhausted)" if g.exhausted else ""))
    models = [PayoffModel.STANDARD, PayoffModel.ARR] if model == "both" else [PayoffModel(model)]
    for m in models:
        vm = solve_payoff(g, m)
        dist = vm.distance[g.root]
        note = f" approximate={len(vm.approximate)}" if vm.approximate else ""
        click.echo(f"{m.value}: root={vm[g.root].label}" + (f" distance={dist}" if dist is not None else "") + note)
    if model == "both":
        cmp = compare_rules(g)
        click.echo("changed: " + (", ".join(f"{k}={v}" for k, v in sorted(cmp.counts().items())) or "none"))
        if out:
            _write(Path(out), cmp, fmt, graph=g)
    elif out:
        raise click.UsageError("--out needs --model both")
    if graph_out:
        try:
            Path(graph_out).write_text(graph_to_text(g), encoding="utf-8")
        except OSError as exc:
            raise DataError(f"cannot write {graph_out}: {exc.strerror}") from None


@cli.command()
@click.argument("inputs", nargs=-1, type=click.Path(dir_okay=False, exists=True))
@click.option("--format", "fmt", required=True, help="csv or json.")
@click.option("--out", "out", type=click.Path(file_okay=False), default=None, help="Directory; default is stdout.")
@click.option("--conversions", default=None, help="Comma-separated evaluations (pawns) to convert with both models.")
def report(inputs: tuple[str, ...], fmt: str, out: Optional[str], conversions: Optional[str]) -> None:
    """Re-emit JSON report documents as CSV or JSON."""
    if fmt.lower() not in FORMATS:
        raise click.UsageError(f"unknown format {fmt!r}; expected csv or json")
    tables = []
    for path in inputs:
        try:
            tables.append((Path(path).stem, load_document(path)))
        except (OSError, ValueError) as exc:
            raise DataError(str(exc)) from None
    if conversions:
        try:
            evals = [float(x) for x in conversions.split(",") if x.strip()]
        except ValueError:
            raise click.UsageError("--conversions takes numbers like 0.22,0.25") from None
        tables.append(("conversions", conversions_table(evals)))
    if not tables:
        raise click.UsageError("nothing to report: give input documents or --conversions")
    for stem, table in tables:
        try:
            text = render(table, fmt)
        except UnknownFormatError as exc:
            raise click.UsageError(str(exc)) from None
        if out:
            _write(_out_dir(out) / f"{stem}.{fmt.lower()}", table, fmt)
        else:
            click.echo(text, nl=False)


@cli.command()
@click.argument("fen")
@click.argument("depth", type=click.IntRange(min=0))
@click.option("--divide", "split", is_flag=True, help="Per-move counts.")
def perft(fen: str, depth: int, split: bool) -> None:
    """Count leaf nodes of the legal move tree."""
    try:
        pos = parse_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1" if fen == "startpos" else fen)
    except (FenError, ValueError) as exc:
        raise DataError(f"bad FEN: {exc}") from None
    t0 = time.perf_counter()
    if split and depth > 0:
        parts = divide(pos, depth)
        for mv, n in sorted(parts.items()):
            click.echo(f"{mv}: {n}")
        total = sum(parts.values())
    else:
        total = core_perft(pos, depth)
    click.echo(f"nodes {total} ({time.perf_counter() - t0:.2f}s)")


def main(argv: Optional[list[str]] = None) -> int:
    try:
        cli.main(args=argv, prog_name="arrchess", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except (DataError, EngineFailure) as exc:
        exc.show()
        return exc.exit_code
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
