"""Streaming PGN ingestion, replay, and outcome aggregation."""

from __future__ import annotations

import codecs
import io
import logging
import re
from dataclasses import dataclass, field, replace
from typing import IO, Iterable, Iterator, Optional, Union

from .core.game import (
    Cause,
    GameState,
    Result,
    RuleSet,
    Status,
    TerminationVerdict,
    apply_ruleset,
    finished,
    standard_verdict,
    ONGOING,
)
from .core.notation import NotationError, _parse_san_text, parse_san
from .core.position import Color, FenError, Position, parse_fen

log = logging.getLogger(__name__)

RESULT_TOKENS = ("1-0", "0-1", "1/2-1/2", "*")
_TAG_RE = re.compile(r'^\[\s*([A-Za-z0-9_]+)\s+"((?:[^"\\]|\\.)*)"\s*\]')
_TOKEN_RE = re.compile(r"\d+\.+|[^\s.{}();$]+|\$\d+|\S")
_VARIATION_RE = re.compile(r"[{;()]")
_MOVE_NUMBER_RE = re.compile(r"^\d+\.+$")


@dataclass
class PgnGame:
    tags: dict[str, str]
    moves: list[str]
    result: str
    index: int = 0

    @property
    def white_elo(self) -> Optional[int]:
        return _elo(self.tags.get("WhiteElo"))

    @property
    def black_elo(self) -> Optional[int]:
        return _elo(self.tags.get("BlackElo"))


@dataclass
class PgnError:
    index: int
    message: str
    tags: dict[str, str] = field(default_factory=dict)
    ply: Optional[int] = None


def _elo(value: Optional[str]) -> Optional[int]:
    if not value:
        return None
    try:
        elo = int(value.strip())
    except ValueError:
        return None
    return elo if elo > 0 else None


class _GameBuilder:
    __slots__ = ("tags", "moves", "error", "in_comment", "depth", "has_movetext")

    def __init__(self) -> None:
        self.tags: dict[str, str] = {}
        self.moves: list[str] = []
        self.error: Optional[str] = None
        self.in_comment = False
        self.depth = 0
        self.has_movetext = False

    @property
    def empty(self) -> bool:
        return not self.tags and not self.has_movetext and self.error is None


def _iter_lines(source) -> Iterator[str]:
    if isinstance(source, (bytes, bytearray)):
        source = io.BytesIO(bytes(source))
    if isinstance(source, str):
        yield from source.splitlines()
        return
    decoder = None
    for raw in source:
        if isinstance(raw, str):
            yield raw.rstrip("\r\n")
            continue
        if decoder is None:
            decoder = codecs.getincrementaldecoder("utf-8")(errors="replace")
            if raw.startswith(codecs.BOM_UTF8):
                raw = raw[3:]
        yield decoder.decode(raw).rstrip("\r\n")


def parse_pgn_stream(source: Union[bytes, str, IO[bytes], IO[str], Iterable]) -> Iterator[Union[PgnGame, PgnError]]:
    """Yield one PgnGame or PgnError per game found in `source`.

    Comments, NAGs and variations are skipped.  A malformed game produces a
    PgnError and parsing resumes at the next game.
    """
    index = 0
    game = _GameBuilder()
    for line in _iter_lines(source):
        if not line:
            continue
        if not game.in_comment:
            stripped = line.lstrip()
            if not stripped:
                continue
            first = stripped[0]
            if first == "%":
                continue
            if first == "[" and game.depth == 0:
                if game.has_movetext:
                    yield PgnError(index, "unterminated movetext (no result token)", game.tags)
                    index += 1
                    game = _GameBuilder()
                m = _TAG_RE.match(stripped)
                if m is None:
                    game.error = game.error or f"tag syntax error: {stripped[:60]!r}"
                else:
                    name, value = m.group(1), m.group(2).replace('\\"', '"').replace("\\\\", "\\")
                    if name in game.tags:
                        game.error = game.error or f"duplicate tag {name}"
                    game.tags[name] = value
                continue
        result = _consume_movetext(game, line)
        if result is not None:
            if game.error is not None:
                yield PgnError(index, game.error, game.tags)
            else:
                yield PgnGame(game.tags, game.moves, result, index)
            index += 1
            game = _GameBuilder()
    if not game.empty:
        if game.error is not None:
            yield PgnError(index, game.error, game.tags)
        else:
            yield PgnError(index, "unterminated movetext (no result token)", game.tags)


def _consume_movetext(game: _GameBuilder, line: str) -> Optional[str]:
    """Tokenize one movetext line into `game`; return the result token if the game ends."""
    pos = 0
    n = len(line)
    while pos < n:
        if game.in_comment:
            j = line.find("}", pos)
            if j < 0:
                return None
            game.in_comment = False
            pos = j + 1
            continue
        if game.depth:
            # inside a variation: only nesting and comments matter
            m = _VARIATION_RE.search(line, pos)
            if m is None:
                return None
            ch = m.group()
            pos = m.end()
            if ch == ";":
                return None
            if ch == "{":
                game.in_comment = True
            elif ch == "(":
                game.depth += 1
            else:
                game.depth -= 1
            continue
        cut = n
        for ch in "{;()":
            j = line.find(ch, pos, cut)
            if j >= 0:
                cut = j
        for tok in _TOKEN_RE.findall(line, pos, cut):
            r = _token(game, tok)
            if r is not None:
                return r
        if cut == n:
            return None
        ch = line[cut]
        pos = cut + 1
        if ch == ";":
            return None
        if ch == "{":
            game.in_comment = True
        elif ch == "(":
            game.depth += 1
        else:
            game.error = game.error or "unbalanced ')' in movetext"
    return None


def _token(game: _GameBuilder, tok: str) -> Optional[str]:
    if tok in RESULT_TOKENS:
        return tok
    first = tok[0]
    if first.isdigit() and _MOVE_NUMBER_RE.match(tok):
        game.has_movetext = True
        return None
    if first == "$":
        return None
    game.has_movetext = True
    try:
        _parse_san_text(tok)
    except NotationError:
        game.error = game.error or f"illegal SAN token {tok!r} at ply {len(game.moves)}"
        return None
    game.moves.append(tok)
    return None


# ---------------------------------------------------------------- replay


class ReplayError(ValueError):
    def __init__(self, message: str, ply: int):
        super().__init__(message)
        self.ply = ply


@dataclass
class GameRecord:
    source_id: str
    white_elo: Optional[int]
    black_elo: Optional[int]
    standard: TerminationVerdict
    arr: TerminationVerdict
    plies: int
    final_fen: str
    declared_result: str = "*"
    overhang: int = 0
    result_mismatch: bool = False

    @property
    def final_position(self) -> Position:
        return parse_fen(self.final_fen)

    def verdict(self, rules: RuleSet) -> TerminationVerdict:
        return self.arr if rules is RuleSet.ARR else self.standard


def _start_position(game: PgnGame) -> Position:
    fen = game.tags.get("FEN")
    if fen:
        try:
            return parse_fen(fen)
        except FenError as exc:
            raise ReplayError(f"bad FEN tag: {exc}", 0) from None
    return Position.initial()


def replay_and_classify(game: PgnGame, source_id: Optional[str] = None) -> GameRecord:
    """Replay every move and derive standard and ARR verdicts.

    Play stops at the first automatic termination; any remaining moves are
    counted as overhang.  A decisive or drawn result that no automatic rule
    explains is taken from the result token (Adjudication / Agreement).
    """
    pos = _start_position(game)
    state = GameState(pos)
    verdict = ONGOING
    moves = game.moves
    replayed = 0
    # a FEN start may already be terminal
    if pos.halfmove_clock >= 100 or pos.is_insufficient_material():
        verdict = standard_verdict(state)
    if not verdict.finished:
        for tok in moves:
            try:
                mv = parse_san(pos, tok)
            except NotationError as exc:
                v = standard_verdict(state)
                if v.finished:
                    verdict = v
                    break
                raise ReplayError(f"ply {replayed}: {exc}", replayed) from None
            captured = pos._board[mv.to_square] or mv.kind == 3
            pos = pos.play(mv)
            state = GameState(pos, state, mv)
            replayed += 1
            if state.count >= 3 or pos.halfmove_clock >= 100 or (captured and pos.is_insufficient_material()):
                verdict = standard_verdict(state)
                if verdict.finished:
                    break
        else:
            verdict = standard_verdict(state)

    declared = Result.from_pgn(game.result)
    mismatch = False
    if verdict.finished:
        if declared is not None and declared is not verdict.result:
            mismatch = True
            log.debug("game %s: declared %s but replay gives %s", source_id, game.result, verdict.result)
    elif declared is Result.DRAW:
        verdict = finished(Result.DRAW, Cause.AGREEMENT)
    elif declared is not None:
        verdict = finished(declared, Cause.ADJUDICATION)
    overhang = len(moves) - replayed
    if overhang:
        log.debug("game %s: %d moves after automatic termination ignored", source_id, overhang)
    return GameRecord(
        source_id=source_id if source_id is not None else str(game.index),
        white_elo=game.white_elo,
        black_elo=game.black_elo,
        standard=verdict,
        arr=apply_ruleset(verdict, RuleSet.ARR),
        plies=replayed,
        final_fen=pos.fen(),
        declared_result=game.result,
        overhang=overhang,
        result_mismatch=mismatch,
    )


def reclassify_arr(record: GameRecord) -> GameRecord:
    return replace(record, arr=apply_ruleset(record.standard, RuleSet.ARR))


# ------------------------------------------------------------- aggregation

DRAW_REASONS = (
    Cause.AGREEMENT,
    Cause.STALEMATE,
    Cause.INSUFFICIENT_MATERIAL,
    Cause.FIFTY_MOVE,
    Cause.THREEFOLD_REPETITION,
)
# coarse grouping for a draw-reason bar chart
FIGURE_GROUPS = {
    Cause.AGREEMENT: "agreement/technical",
    Cause.FIFTY_MOVE: "agreement/technical",
    Cause.ADJUDICATION: "agreement/technical",
    Cause.INSUFFICIENT_MATERIAL: "insufficient material",
    Cause.STALEMATE: "stalemate",
    Cause.THREEFOLD_REPETITION: "threefold repetition",
}


@dataclass
class RuleCounts:
    """Outcome tallies of one panel under one rule set."""

    total: int = 0
    results: dict[Result, int] = field(default_factory=lambda: {r: 0 for r in Result})
    # (result, cause, completer) -> count
    detail: dict[tuple, int] = field(default_factory=dict)

    def add(self, v: TerminationVerdict) -> None:
        self.total += 1
        self.results[v.result] += 1  # type: ignore[index]
        key = (v.result, v.cause, v.repetition_completer)
        self.detail[key] = self.detail.get(key, 0) + 1

    def rate(self, result: Result) -> float:
        return self.results[result] / self.total if self.total else 0.0

    def draws_by_reason(self) -> dict[Cause, int]:
        out = {c: 0 for c in DRAW_REASONS}
        for (res, cause, _), n in self.detail.items():
            if res is Result.DRAW and cause in out:
                out[cause] += n
        return out

    def repetition_split(self) -> dict[str, int]:
        out = {"White": 0, "Black": 0}
        for (_, cause, completer), n in self.detail.items():
            if cause is Cause.THREEFOLD_REPETITION:
                out["White" if completer == Color.WHITE else "Black"] += n
        return out


@dataclass
class Panel:
    name: str
    rating_floor: Optional[int]
    standard: RuleCounts = field(default_factory=RuleCounts)
    arr: RuleCounts = field(default_factory=RuleCounts)

    def counts(self, rules: RuleSet) -> RuleCounts:
        return self.arr if rules is RuleSet.ARR else self.standard


@dataclass
class OutcomeBreakdown:
    panels: list[Panel]
    rating_floor: Optional[int] = None
    unrated_excluded: int = 0
    below_floor_excluded: int = 0
    unfinished_excluded: int = 0

    def panel(self, name: str) -> Panel:
        for p in self.panels:
            if p.name == name:
                return p
        raise KeyError(name)


def aggregate_outcomes(records: Iterable[GameRecord], rating_floor: Optional[int] = None) -> OutcomeBreakdown:
    """Outcome and draw-reason tallies, unrestricted and (optionally) rating-floored."""
    everything = Panel("all", None)
    panels = [everything]
    floored = None
    if rating_floor is not None:
        floored = Panel(f"elo{rating_floor}", rating_floor)
        panels.append(floored)
    out = OutcomeBreakdown(panels, rating_floor)
    for rec in sorted(records, key=lambda r: r.source_id):
        if not rec.standard.finished:
            out.unfinished_excluded += 1
            continue
        everything.standard.add(rec.standard)
        everything.arr.add(rec.arr)
        if floored is not None:
            if rec.white_elo is None or rec.black_elo is None:
                out.unrated_excluded += 1
            elif rec.white_elo >= rating_floor and rec.black_elo >= rating_floor:  # type: ignore[operator]
                floored.standard.add(rec.standard)
                floored.arr.add(rec.arr)
            else:
                out.below_floor_excluded += 1
    return out


def ingest(sources: Iterable, rating_floor: Optional[int] = None):
    """Parse, replay and aggregate; returns (breakdown, records, errors)."""
    records: list[GameRecord] = []
    errors: list[PgnError] = []
    for s_index, source in enumerate(sources):
        for item in parse_pgn_stream(source):
            if isinstance(item, PgnError):
                errors.append(item)
                continue
            sid = f"{s_index}:{item.index:08d}"
            try:
                records.append(replay_and_classify(item, sid))
            except ReplayError as exc:
                errors.append(PgnError(item.index, str(exc), item.tags, exc.ply))
    return aggregate_outcomes(records, rating_floor), records, errors


# ------------------------------------------------------------------ export

BREAKDOWN_COLUMNS = ("panel", "result", "cause", "completer", "count", "rate")


def _completer_name(c: Optional[Color]) -> str:
    if c is None:
        return ""
    return "White" if c == Color.WHITE else "Black"


def breakdown_rows(bd: OutcomeBreakdown) -> list[dict]:
    """One row per (panel, rule set, result, cause, completer), in a fixed order."""
    rows = []
    result_order = {r: i for i, r in enumerate(Result)}
    cause_order = {c: i for i, c in enumerate(Cause)}
    for p in bd.panels:
        for rules in (RuleSet.STANDARD, RuleSet.ARR):
            rc = p.counts(rules)
            name = f"{p.name}/{rules.value}"
            keys = sorted(
                rc.detail,
                key=lambda k: (result_order[k[0]], cause_order[k[1]], -1 if k[2] is None else int(k[2])),
            )
            for res, cause, completer in keys:
                n = rc.detail[(res, cause, completer)]
                rows.append(
                    {
                        "panel": name,
                        "result": res.value,
                        "cause": cause.value,
                        "completer": _completer_name(completer),
                        "count": n,
                        "rate": n / rc.total,
                    }
                )
    return rows


def breakdown_to_dict(bd: OutcomeBreakdown) -> dict:
    panels = {}
    for p in bd.panels:
        for rules in (RuleSet.STANDARD, RuleSet.ARR):
            rc = p.counts(rules)
            panels[f"{p.name}/{rules.value}"] = {
                "total": rc.total,
                "results": {r.value: rc.results[r] for r in Result},
                "rates": {r.value: rc.rate(r) for r in Result},
                "draw_reasons": {c.value: n for c, n in rc.draws_by_reason().items()},
                "repetition_completer": rc.repetition_split(),
            }
    return {
        "rating_floor": bd.rating_floor,
        "unrated_excluded": bd.unrated_excluded,
        "below_floor_excluded": bd.below_floor_excluded,
        "unfinished_excluded": bd.unfinished_excluded,
        "panels": panels,
        "rows": breakdown_rows(bd),
    }
