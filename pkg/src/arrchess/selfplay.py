"""Engine self-play across the seven setups, under both experimental modes."""

from __future__ import annotations

import json
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Optional, Union

from .core.game import Cause, GameState, Result, RuleSet, TerminationVerdict, apply_ruleset, finished, standard_verdict
from .core.position import WHITE, Color, FenError, Position, parse_fen
from .engine import (
    EngineConfig,
    EngineError,
    EngineHandle,
    ForcedRepetition,
    best_move,
    filtered_best_move,
    new_game,
    start_engine,
)
from .stats import Interval, wilson_interval

log = logging.getLogger(__name__)

MAX_PLIES = 400


class Mode(Enum):
    RUN1 = "Run1"  # both sides free, ARR verdict derived afterwards
    RUN2 = "Run2"  # White's third-occurrence moves are filtered out


@dataclass(frozen=True)
class SetupSpec:
    setup_id: str
    white_depth_offset: int
    black_depth_offset: int
    white_contempt: int
    black_contempt: int
    description: str = ""

    def engine_configs(self, base: EngineConfig, depth: int) -> tuple[EngineConfig, EngineConfig]:
        wd = depth + self.white_depth_offset
        bd = depth + self.black_depth_offset
        if wd < 1 or bd < 1:
            raise ValueError(f"setup {self.setup_id}: depth {depth} gives a search depth below 1")
        white = base.with_changes(depth=wd, options={**base.options, "Contempt": self.white_contempt})
        black = base.with_changes(depth=bd, options={**base.options, "Contempt": self.black_contempt})
        return white, black


SETUPS: dict[str, SetupSpec] = {
    s.setup_id: s
    for s in (
        SetupSpec("A", 0, 0, 0, 0, "equal strength, neutral"),
        SetupSpec("B", 0, 0, 50, -50, "equal strength, White avoids draws"),
        SetupSpec("C", 2, 0, 0, 0, "White stronger, neutral"),
        SetupSpec("D", 2, 0, 50, -50, "White stronger, White avoids draws"),
        SetupSpec("E", -2, 0, 50, 0, "White weaker, White avoids draws"),
        SetupSpec("F", -2, 0, 0, 0, "White weaker, neutral"),
        SetupSpec("G", -2, 0, -50, 0, "White weaker, White seeks draws"),
    )
}


# ------------------------------------------------------------------ openings


@dataclass(frozen=True)
class Opening:
    opening_id: int
    name: str
    position: Position

    @property
    def fen(self) -> str:
        return self.position.fen()


def _parse_book_line(line: str) -> tuple[str, str]:
    """(fen, name) from an EPD line (four fields plus opcodes) or a full FEN."""
    fields = line.split()
    if len(fields) >= 6 and fields[4].isdigit() and fields[5].rstrip(";").isdigit():
        return " ".join(fields[:6]), ""
    if len(fields) < 4:
        raise FenError("too few fields")
    fen = " ".join(fields[:4]) + " 0 1"
    name = ""
    rest = " ".join(fields[4:])
    if 'id "' in rest:
        name = rest.split('id "', 1)[1].split('"', 1)[0]
    return fen, name


def load_openings(path: Union[str, Path, None] = None) -> list[Opening]:
    """Read an EPD/FEN list; the bundled 100-line book when `path` is None."""
    if path is None:
        text = resources.files("arrchess.data").joinpath("openings.epd").read_text()
        source = "openings.epd"
    else:
        text = Path(path).read_text()
        source = str(path)
    out: list[Opening] = []
    seen: set[tuple] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            fen, name = _parse_book_line(line)
            pos = parse_fen(fen)
        except FenError as exc:
            raise ValueError(f"{source}:{lineno}: invalid position: {exc}") from None
        key = pos.reduced()
        if key in seen:
            log.warning("%s:%d: duplicate opening removed", source, lineno)
            continue
        seen.add(key)
        out.append(Opening(len(out), name or f"line {lineno}", pos))
    if not out:
        raise ValueError(f"{source}: no openings")
    return out


# ------------------------------------------------------------------- games


@dataclass
class PreRepetition:
    """The position just before the first third-occurrence move."""

    fen: str
    score: Optional[int]  # engine score for the repeating move, White's side
    ply: int
    completer: Color


@dataclass
class GameLog:
    setup_id: str
    depth: int
    mode: Mode
    opening_id: int
    opening_fen: str
    moves: list[str] = field(default_factory=list)
    scores: list[Optional[int]] = field(default_factory=list)
    standard: Optional[TerminationVerdict] = None
    arr: Optional[TerminationVerdict] = None
    pre_repetition: Optional[PreRepetition] = None
    forced_repetition: bool = False
    game_index: int = 0
    error: Optional[str] = None

    @property
    def valid(self) -> bool:
        return self.error is None and self.standard is not None

    def verdict(self, rules: RuleSet) -> Optional[TerminationVerdict]:
        return self.arr if rules is RuleSet.ARR else self.standard

    def to_dict(self) -> dict:
        return {
            "setup": self.setup_id,
            "depth": self.depth,
            "mode": self.mode.value,
            "game_index": self.game_index,
            "opening_id": self.opening_id,
            "opening_fen": self.opening_fen,
            "moves": self.moves,
            "scores": self.scores,
            "standard": self.standard.to_dict() if self.standard else None,
            "arr": self.arr.to_dict() if self.arr else None,
            "forced_repetition": self.forced_repetition,
            "pre_repetition": None
            if self.pre_repetition is None
            else {
                "fen": self.pre_repetition.fen,
                "score": self.pre_repetition.score,
                "ply": self.pre_repetition.ply,
                "completer": "White" if self.pre_repetition.completer == Color.WHITE else "Black",
            },
            "error": self.error,
        }


def _open(engine: Union[EngineConfig, EngineHandle]) -> tuple[EngineHandle, bool]:
    if isinstance(engine, EngineHandle):
        return engine, False
    return start_engine(engine), True


def play_game(
    white: Union[EngineConfig, EngineHandle],
    black: Union[EngineConfig, EngineHandle],
    opening: Union[Opening, Position],
    mode: Mode,
    max_plies: int = MAX_PLIES,
    setup_id: str = "",
    depth: int = 0,
    game_index: int = 0,
) -> GameLog:
    """Play one engine game from `opening` and log both verdicts.

    In Run2 White searches only moves that do not create a third
    occurrence.  When no such move exists the game ends with White's
    unrestricted choice, which completes the repetition and is therefore a
    Black win under ARR.
    """
    if isinstance(opening, Position):
        opening = Opening(-1, "", opening)
    glog = GameLog(setup_id, depth, mode, opening.opening_id, opening.fen, game_index=game_index)
    handles: list[tuple[EngineHandle, bool]] = []
    try:
        wh = _open(white)
        handles.append(wh)
        bh = _open(black)
        handles.append(bh)
        for h, _ in handles:
            new_game(h)
        _play(glog, wh[0], bh[0], opening.position, mode, max_plies)
    except EngineError as exc:
        glog.error = f"{type(exc).__name__}: {exc}"
        glog.standard = glog.arr = None
    finally:
        for h, owned in handles:
            if owned:
                h.close()
    return glog


def _play(glog: GameLog, white: EngineHandle, black: EngineHandle, start: Position, mode: Mode, max_plies: int) -> None:
    state = GameState(start)
    while True:
        verdict = standard_verdict(state)
        if verdict.finished:
            break
        if state.ply >= max_plies:
            verdict = finished(Result.DRAW, Cause.ADJUDICATION)
            break
        pos = state.position
        if pos.turn == WHITE:
            if mode is Mode.RUN2:
                res = filtered_best_move(white, state)
                if isinstance(res, ForcedRepetition):
                    glog.forced_repetition = True
                    res = best_move(white, state)
            else:
                res = best_move(white, state)
        else:
            res = best_move(black, state)
        score = res.white_score(pos.turn)
        nxt = GameState(pos.play(res.move), state, res.move)
        if nxt.count >= 3 and glog.pre_repetition is None:
            glog.pre_repetition = PreRepetition(pos.fen(), score, state.ply, Color(pos.turn))
        glog.moves.append(res.move.uci())
        glog.scores.append(score)
        state = nxt
    glog.standard = verdict
    glog.arr = apply_ruleset(verdict, RuleSet.ARR)


# -------------------------------------------------------------------- grid


@dataclass
class MatchPlan:
    engine: EngineConfig
    base_depth: int = 8
    setups: list[str] = field(default_factory=lambda: list(SETUPS))
    games_per_cell: int = 10
    modes: list[Mode] = field(default_factory=lambda: [Mode.RUN1, Mode.RUN2])
    openings: Optional[list[Opening]] = None
    book: Optional[str] = None
    seed: int = 0
    workers: int = 1
    max_consecutive_failures: int = 3
    max_plies: int = MAX_PLIES

    def __post_init__(self) -> None:
        if self.games_per_cell < 1:
            raise ValueError("games_per_cell must be >= 1")
        unknown = [s for s in self.setups if s not in SETUPS]
        if unknown:
            raise ValueError(f"unknown setups {unknown}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def opening_book(self) -> list[Opening]:
        if self.openings is None:
            self.openings = load_openings(self.book)
        return self.openings

    def opening_order(self) -> list[int]:
        """Seeded shuffle of book indices; game i of every cell uses entry i mod n."""
        order = list(range(len(self.opening_book())))
        random.Random(self.seed).shuffle(order)
        return order

    @classmethod
    def from_json(cls, data: Union[str, dict], engine_override: Optional[Union[str, list]] = None) -> "MatchPlan":
        if isinstance(data, str):
            data = json.loads(data)
        eng = data.get("engine", {})
        if isinstance(eng, str):
            eng = {"path": eng}
        path = engine_override or eng.get("path")
        if not path:
            raise ValueError("no engine path configured")
        cfg = EngineConfig(
            path,
            options=dict(eng.get("options", {})),
            depth=int(data.get("base_depth", 8)),
            handshake_timeout_ms=int(eng.get("handshake_timeout_ms", 10_000)),
            search_timeout_ms=int(eng.get("search_timeout_ms", 120_000)),
            hash_mb=int(eng.get("hash_mb", 16)),
        )
        return cls(
            engine=cfg,
            base_depth=int(data.get("base_depth", 8)),
            setups=list(data.get("setups", list(SETUPS))),
            games_per_cell=int(data.get("games_per_cell", 10)),
            modes=[Mode(m) for m in data.get("modes", ["Run1", "Run2"])],
            book=data.get("book"),
            seed=int(data.get("seed", 0)),
            workers=int(data.get("workers", 1)),
            max_consecutive_failures=int(data.get("max_consecutive_failures", 3)),
            max_plies=int(data.get("max_plies", MAX_PLIES)),
        )


@dataclass
class CellStats:
    setup_id: str
    depth: int
    mode: Mode
    rules: RuleSet
    games: int
    white_wins: int
    black_wins: int
    draws: int
    invalid: int = 0
    aborted: bool = False

    def rate(self, n: int) -> float:
        return n / self.games if self.games else 0.0

    @property
    def white_win_rate(self) -> float:
        return self.rate(self.white_wins)

    @property
    def black_win_rate(self) -> float:
        return self.rate(self.black_wins)

    @property
    def draw_rate(self) -> float:
        return self.rate(self.draws)

    @property
    def white_score(self) -> float:
        return (self.white_wins + 0.5 * self.draws) / self.games if self.games else 0.0

    @property
    def black_score(self) -> float:
        return (self.black_wins + 0.5 * self.draws) / self.games if self.games else 0.0

    def interval(self, n: int, confidence: float = 0.95) -> Optional[Interval]:
        return wilson_interval(n, self.games, confidence) if self.games else None

    def to_row(self) -> dict:
        row: dict = {
            "setup": self.setup_id,
            "depth": self.depth,
            "mode": self.mode.value,
            "ruleset": self.rules.value,
            "games": self.games,
            "white_wins": self.white_wins,
            "black_wins": self.black_wins,
            "draws": self.draws,
            "white_win_rate": self.white_win_rate,
            "black_win_rate": self.black_win_rate,
            "draw_rate": self.draw_rate,
            "white_score": self.white_score,
            "black_score": self.black_score,
        }
        for label, n in (("white_win", self.white_wins), ("black_win", self.black_wins), ("draw", self.draws)):
            iv = self.interval(n)
            row[f"{label}_lo"] = iv.lower if iv else ""
            row[f"{label}_hi"] = iv.upper if iv else ""
        row["invalid"] = self.invalid
        row["aborted"] = self.aborted
        return row


STATS_COLUMNS = list(
    CellStats("A", 1, Mode.RUN1, RuleSet.STANDARD, 1, 0, 0, 1).to_row().keys()
)


def outcome_stats(logs: list[GameLog], aborted: Optional[set] = None) -> list[CellStats]:
    """Per (setup, depth, mode, rule set) tallies over valid games."""
    aborted = aborted or set()
    cells: dict[tuple, list[GameLog]] = {}
    for g in logs:
        cells.setdefault((g.setup_id, g.depth, g.mode.value), []).append(g)
    out = []
    for key in sorted(cells):
        setup_id, depth, mode = key
        group = cells[key]
        ok = [g for g in group if g.valid]
        for rules in (RuleSet.STANDARD, RuleSet.ARR):
            res = [g.verdict(rules).result for g in ok]  # type: ignore[union-attr]
            out.append(
                CellStats(
                    setup_id,
                    depth,
                    Mode(mode),
                    rules,
                    len(ok),
                    res.count(Result.WHITE_WIN),
                    res.count(Result.BLACK_WIN),
                    res.count(Result.DRAW),
                    invalid=len(group) - len(ok),
                    aborted=key in aborted,
                )
            )
    return out


def _play_cell(plan: MatchPlan, setup_id: str, depth: int, mode: Mode, order: list[int]) -> tuple[list[GameLog], bool]:
    book = plan.opening_book()
    white_cfg, black_cfg = SETUPS[setup_id].engine_configs(plan.engine, depth)
    logs: list[GameLog] = []
    handles: Optional[tuple[EngineHandle, EngineHandle]] = None
    failures = 0
    aborted = False
    try:
        for i in range(plan.games_per_cell):
            opening = book[order[i % len(order)]]
            try:
                if handles is None:
                    w = start_engine(white_cfg)
                    try:
                        b = start_engine(black_cfg)
                    except EngineError:
                        w.close()
                        raise
                    handles = (w, b)
            except EngineError as exc:
                g = GameLog(setup_id, depth, mode, opening.opening_id, opening.fen, game_index=i)
                g.error = f"{type(exc).__name__}: {exc}"
            else:
                g = play_game(handles[0], handles[1], opening, mode, plan.max_plies, setup_id, depth, i)
            logs.append(g)
            if g.error is not None:
                failures += 1
                log.warning("cell %s/%d/%s game %d failed: %s", setup_id, depth, mode.value, i, g.error)
                if handles is not None:
                    for h in handles:
                        h.close()
                    handles = None
                if failures >= plan.max_consecutive_failures:
                    aborted = True
                    break
            else:
                failures = 0
    finally:
        if handles is not None:
            for h in handles:
                h.close()
    return logs, aborted


def run_setup_grid(plan: MatchPlan, depths: Optional[list[int]] = None) -> tuple[list[GameLog], list[CellStats]]:
    """Play every (setup, depth, mode) cell and return logs plus statistics."""
    depths = list(depths) if depths else [plan.base_depth]
    order = plan.opening_order()
    cells = [(s, d, m) for s in plan.setups for d in depths for m in plan.modes]
    if plan.workers == 1:
        results = [_play_cell(plan, s, d, m, order) for s, d, m in cells]
    else:
        with ThreadPoolExecutor(plan.workers) as pool:
            results = list(pool.map(lambda c: _play_cell(plan, c[0], c[1], c[2], order), cells))
    logs: list[GameLog] = []
    aborted = set()
    for (s, d, m), (cell_logs, was_aborted) in zip(cells, results):
        logs.extend(cell_logs)
        if was_aborted:
            aborted.add((s, d, m.value))
    logs.sort(key=lambda g: (g.setup_id, g.depth, g.mode.value, g.game_index))
    return logs, outcome_stats(logs, aborted)


# -------------------------------------------------------------- extraction


@dataclass(frozen=True)
class PreRepetitionSample:
    position: Position
    score: Optional[int]
    setup_id: str
    depth: int
    game_index: int
    ply: int
    completer: Color


def collect_pre_repetition(logs: list[GameLog]) -> list[PreRepetitionSample]:
    """Snapshots taken just before each game's repetition-completing move."""
    out = []
    for g in logs:
        if g.pre_repetition is None or not g.valid:
            continue
        p = g.pre_repetition
        out.append(PreRepetitionSample(parse_fen(p.fen), p.score, g.setup_id, g.depth, g.game_index, p.ply, p.completer))
    return out


# --------------------------------------------------------------------- PGN


def game_log_to_pgn(g: GameLog) -> str:
    from .core.notation import parse_uci, san

    pos = parse_fen(g.opening_fen)
    sans = []
    for u in g.moves:
        mv = parse_uci(pos, u)
        sans.append(san(pos, mv))
        pos = pos.play(mv)
    std = g.standard
    result = std.result.pgn if std is not None and std.result is not None else "*"
    arr_result = g.arr.result.pgn if g.arr is not None and g.arr.result is not None else "*"
    completer = ""
    if std is not None and std.repetition_completer is not None:
        completer = "White" if std.repetition_completer == Color.WHITE else "Black"
    tags = [
        ("Event", f"ARR self-play {g.setup_id}"),
        ("Site", "local"),
        ("Round", str(g.game_index + 1)),
        ("White", f"engine-{g.setup_id}-white"),
        ("Black", f"engine-{g.setup_id}-black"),
        ("Result", result),
        ("SetUp", "1"),
        ("FEN", g.opening_fen),
        ("Setup", g.setup_id),
        ("Depth", str(g.depth)),
        ("Mode", g.mode.value),
        ("ARRResult", arr_result),
        ("Completer", completer),
        ("Termination", std.cause.value if std is not None and std.cause else (g.error or "")),
    ]
    head = "".join(f'[{k} "{v}"]\n' for k, v in tags)
    black_first = parse_fen(g.opening_fen).turn != WHITE
    start_no = parse_fen(g.opening_fen).fullmove_number
    words = []
    for i, s in enumerate(sans):
        ply = i + (1 if black_first else 0)
        if ply % 2 == 0:
            words.append(f"{start_no + ply // 2}.")
        elif i == 0:
            words.append(f"{start_no}...")
        words.append(s)
    words.append(result)
    lines, cur = [], ""
    for w in words:
        if cur and len(cur) + 1 + len(w) > 79:
            lines.append(cur)
            cur = w
        else:
            cur = f"{cur} {w}" if cur else w
    lines.append(cur)
    return head + "\n" + "\n".join(lines) + "\n\n"
