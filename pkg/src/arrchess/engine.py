"""UCI engine client with the client-side repetition filter."""

from __future__ import annotations

import atexit
import logging
import os
import queue
import subprocess
import sys
import threading
import time
import weakref
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .core.game import GameState
from .core.notation import NotationError, parse_uci
from .core.position import WHITE, Move, Position

log = logging.getLogger(__name__)

MATE_BASE = 32000
ENGINE_ENV = "ARRCHESS_ENGINE"


class EngineError(RuntimeError):
    pass


class EngineSpawnError(EngineError):
    pass


class EngineTimeout(EngineError):
    pass


class ProtocolError(EngineError):
    pass


class EngineClosedError(EngineError):
    pass


@dataclass
class EngineConfig:
    """How to launch and configure one engine process.

    `path` is either an executable path or a full argv list.  With
    `deterministic` set, Threads=1 and a fixed Hash size are sent unless the
    option map already names them.
    """

    path: Union[str, Sequence[str]]
    options: dict[str, object] = field(default_factory=dict)
    depth: int = 8
    handshake_timeout_ms: int = 10_000
    search_timeout_ms: int = 120_000
    deterministic: bool = True
    hash_mb: int = 16
    mate_base: int = MATE_BASE

    def __post_init__(self) -> None:
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.handshake_timeout_ms <= 0 or self.search_timeout_ms <= 0:
            raise ValueError("timeouts must be positive")

    def argv(self) -> list[str]:
        if isinstance(self.path, str):
            return [self.path]
        return list(self.path)

    def effective_options(self) -> dict[str, object]:
        opts: dict[str, object] = {}
        if self.deterministic:
            opts["Threads"] = 1
            opts["Hash"] = self.hash_mb
        opts.update(self.options)
        return opts

    def with_changes(self, **changes) -> "EngineConfig":
        data = dict(self.__dict__)
        data["options"] = dict(self.options)
        data.update(changes)
        return EngineConfig(**data)


def default_engine_path() -> Optional[str]:
    return os.environ.get(ENGINE_ENV) or None


def stub_engine_argv(script_path: str) -> list[str]:
    """argv for the bundled scripted engine."""
    return [sys.executable, "-m", "arrchess.stub_engine", script_path]


@dataclass
class SearchRequest:
    state: GameState
    depth: Optional[int] = None
    restricted: Optional[list[Move]] = None

    def __post_init__(self) -> None:
        if self.restricted is not None:
            if not self.restricted:
                raise ValueError("restricted move set must be nonempty when given")
            legal = set(self.state.position.legal_moves())
            bad = [m.uci() for m in self.restricted if m not in legal]
            if bad:
                raise ValueError(f"restricted moves not legal: {bad}")
        if self.depth is not None and self.depth < 1:
            raise ValueError("depth must be >= 1")


@dataclass
class SearchResult:
    move: Move
    score_cp: Optional[int]
    mate: Optional[int]
    depth: Optional[int]
    info: str

    def white_score(self, turn: int, mate_base: int = MATE_BASE) -> Optional[int]:
        """Score in centipawns from White's side, mates mapped to +-(mate_base - N)."""
        value = _as_cp(self.score_cp, self.mate, mate_base)
        if value is None:
            return None
        return value if turn == WHITE else -value


@dataclass
class ForcedRepetition:
    """Every legal White move would create a third occurrence."""

    state: GameState
    moves: list[Move]


def _as_cp(cp: Optional[int], mate: Optional[int], mate_base: int) -> Optional[int]:
    if mate is not None:
        if mate > 0:
            return mate_base - mate
        return -(mate_base + mate) if mate < 0 else -mate_base
    return cp


def parse_info_score(line: str) -> tuple[Optional[int], Optional[int], Optional[int]]:
    """(cp, mate, depth) from a UCI info line; missing parts are None."""
    parts = line.split()
    cp = mate = depth = None
    i = 1
    while i < len(parts):
        tok = parts[i]
        if tok == "depth" and i + 1 < len(parts):
            depth = _int(parts[i + 1])
            i += 2
        elif tok == "score" and i + 2 < len(parts):
            kind, val = parts[i + 1], _int(parts[i + 2])
            if kind == "cp":
                cp, mate = val, None
            elif kind == "mate":
                mate, cp = val, None
            i += 3
        elif tok == "pv" or tok == "string":
            break
        else:
            i += 1
    return cp, mate, depth


def _int(text: str) -> Optional[int]:
    try:
        return int(text)
    except ValueError:
        return None


_LIVE: "weakref.WeakSet[EngineHandle]" = weakref.WeakSet()


@atexit.register
def _kill_all() -> None:
    for h in list(_LIVE):
        h.close()


class EngineHandle:
    """One engine child process.  Not safe for concurrent use."""

    def __init__(self, cfg: EngineConfig):
        self.config = cfg
        self.name = ""
        self.advertised: set[str] = set()
        self.warnings: list[str] = []
        self._lines: "queue.Queue[Optional[str]]" = queue.Queue()
        self._closed = False
        try:
            self._proc = subprocess.Popen(
                cfg.argv(),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
                text=True,
                bufsize=1,
            )
        except (OSError, ValueError) as exc:
            raise EngineSpawnError(f"cannot start engine {cfg.path!r}: {exc}") from None
        self._reader = threading.Thread(target=self._pump, daemon=True)
        self._reader.start()
        _LIVE.add(self)

    def _pump(self) -> None:
        out = self._proc.stdout
        assert out is not None
        for line in out:
            self._lines.put(line.rstrip("\r\n"))
        self._lines.put(None)

    @property
    def alive(self) -> bool:
        return not self._closed and self._proc.poll() is None

    def send(self, line: str) -> None:
        if self._closed:
            raise EngineClosedError("engine handle is closed")
        try:
            assert self._proc.stdin is not None
            self._proc.stdin.write(line + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError, ValueError):
            raise EngineError("engine died (write failed)") from None

    def read_until(self, prefix: str, timeout_ms: int) -> list[str]:
        """Read lines up to and including the first one starting with `prefix`."""
        if self._closed:
            raise EngineClosedError("engine handle is closed")
        deadline = time.monotonic() + timeout_ms / 1000
        out = []
        while True:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise EngineTimeout(f"no {prefix!r} within {timeout_ms} ms")
            try:
                line = self._lines.get(timeout=remaining)
            except queue.Empty:
                raise EngineTimeout(f"no {prefix!r} within {timeout_ms} ms") from None
            if line is None:
                raise EngineError(f"engine died while waiting for {prefix!r}")
            out.append(line)
            if line == prefix or line.startswith(prefix + " "):
                return out

    def close(self) -> None:
        if self._closed:
            return
        self._closed = True
        try:
            if self._proc.poll() is None and self._proc.stdin is not None:
                self._proc.stdin.write("quit\n")
                self._proc.stdin.flush()
        except (OSError, ValueError):
            pass
        try:
            self._proc.wait(timeout=1)
        except subprocess.TimeoutExpired:
            self._proc.kill()
            self._proc.wait()
        for stream in (self._proc.stdin, self._proc.stdout):
            try:
                if stream is not None:
                    stream.close()
            except OSError:
                pass
        _LIVE.discard(self)

    def __enter__(self) -> "EngineHandle":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def __del__(self) -> None:
        try:
            self.close()
        except Exception:
            pass


def start_engine(cfg: EngineConfig) -> EngineHandle:
    """Spawn the engine and complete the UCI handshake."""
    h = EngineHandle(cfg)
    try:
        h.send("uci")
        for line in h.read_until("uciok", cfg.handshake_timeout_ms):
            if line.startswith("id name "):
                h.name = line[8:].strip()
            elif line.startswith("option name "):
                rest = line[12:]
                cut = rest.find(" type ")
                h.advertised.add((rest[:cut] if cut >= 0 else rest).strip().lower())
        for name, value in cfg.effective_options().items():
            if name.lower() not in h.advertised:
                msg = f"engine {h.name or cfg.path!r} does not support option {name!r}; ignored"
                log.warning(msg)
                h.warnings.append(msg)
                continue
            h.send(f"setoption name {name} value {_option_value(value)}")
        h.send("isready")
        h.read_until("readyok", cfg.handshake_timeout_ms)
    except EngineError:
        h.close()
        raise
    return h


def _option_value(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def new_game(h: EngineHandle) -> None:
    h.send("ucinewgame")
    h.send("isready")
    h.read_until("readyok", h.config.handshake_timeout_ms)


def _position_command(state: GameState) -> str:
    hist = state.history()
    moves = [s.last_move.uci() for s in hist[1:] if s.last_move is not None]
    cmd = f"position fen {hist[0].position.fen()}"
    if moves:
        cmd += " moves " + " ".join(moves)
    return cmd


def _search(h: EngineHandle, pos: Position, position_cmd: str, depth: int, restricted: Optional[list[Move]]) -> SearchResult:
    h.send(position_cmd)
    go = f"go depth {depth}"
    if restricted is not None:
        seen: dict[str, None] = {}
        for m in restricted:
            seen.setdefault(m.uci(), None)
        go += " searchmoves " + " ".join(seen)
    h.send(go)
    lines = h.read_until("bestmove", h.config.search_timeout_ms)
    cp = mate = reached = None
    info = ""
    for line in lines:
        if line.startswith("info") and " score " in line:
            c, m, d = parse_info_score(line)
            if c is not None or m is not None:
                cp, mate, info = c, m, line
                reached = d if d is not None else reached
    parts = lines[-1].split()
    if len(parts) < 2:
        raise ProtocolError(f"malformed bestmove line {lines[-1]!r}")
    try:
        move = parse_uci(pos, parts[1])
    except NotationError:
        raise ProtocolError(f"engine returned illegal move {parts[1]!r} in {pos.fen()}") from None
    if restricted is not None and move not in restricted:
        raise ProtocolError(f"engine move {parts[1]} outside searchmoves")
    return SearchResult(move, cp, mate, reached, info)


def best_move(h: EngineHandle, req: Union[SearchRequest, GameState]) -> SearchResult:
    if isinstance(req, GameState):
        req = SearchRequest(req)
    if not req.state.position.legal_moves():
        raise ValueError("no legal moves: game is over")
    depth = req.depth or h.config.depth
    return _search(h, req.state.position, _position_command(req.state), depth, req.restricted)


def non_repeating_moves(state: GameState) -> tuple[list[Move], list[Move]]:
    """(allowed, legal): allowed moves do not create a third occurrence."""
    legal = state.position.legal_moves()
    allowed = [m for m in legal if GameState(state.position.play(m), state, m).count <= 2]
    return allowed, legal


def filtered_best_move(h: EngineHandle, state: GameState, depth: Optional[int] = None) -> Union[SearchResult, ForcedRepetition]:
    """White's move with every third-occurrence move excluded from the search."""
    if state.position.turn != WHITE:
        raise ValueError("the repetition filter applies to White only")
    allowed, legal = non_repeating_moves(state)
    if not legal:
        raise ValueError("no legal moves: game is over")
    if not allowed:
        return ForcedRepetition(state, legal)
    restricted = None if len(allowed) == len(legal) else allowed
    return best_move(h, SearchRequest(state, depth, restricted))


def evaluate_static(h: EngineHandle, pos: Position, depth: int = 1) -> int:
    """Engine score of `pos` in centipawns from White's side."""
    result = _search(h, pos, f"position fen {pos.fen()}", depth, None) if pos.legal_moves() else None
    if result is None:
        raise ValueError("position has no legal moves")
    value = result.white_score(pos.turn, h.config.mate_base)
    if value is None:
        raise ProtocolError("engine reported no score")
    return value
