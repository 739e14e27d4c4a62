"""A scripted UCI engine for tests and offline demos.

Run as ``python -m arrchess.stub_engine SCRIPT.json``.  The script is a JSON
object; every key is optional:

``name``
    engine name reported in ``id name``.
``options``
    option names to advertise (default ``["Hash", "Threads"]``).
``moves``
    map from a position key (the first four FEN fields) to a list of UCI
    moves in order of preference; the first one allowed by ``searchmoves``
    and legal is played.
``scores``
    map from position key to ``"cp N"`` or ``"mate N"``, side-to-move view.
``policy``
    how to choose a move for unscripted positions: ``"material"`` (default),
    a one-ply greedy search on a symmetric material count; ``"first"``,
    the first allowed move in UCI order; or ``"repeat"``, which prefers
    moves back to the most frequent earlier position of the game and
    otherwise falls back to material.
``bestmove``
    map from position key to a raw bestmove reply, sent verbatim (used to
    simulate a misbehaving engine).
``log``
    path of a file that receives every command line read from stdin.
``silent_handshake``
    never answer ``uci`` (simulates a hung engine).
``die_on_go``
    exit as soon as a search is requested.
"""

from __future__ import annotations

import json
import sys
from typing import Optional, TextIO

from .core.notation import parse_uci
from .core.position import Position, parse_fen

PIECE_VALUES = {1: 100, 2: 300, 3: 300, 4: 500, 5: 900, 6: 0}


def position_key(pos: Position) -> str:
    return " ".join(pos.fen().split()[:4])


def material(pos: Position) -> int:
    """Material balance from the side to move's point of view."""
    total = 0
    for piece in pos.placement().values():
        v = PIECE_VALUES[int(piece.piece_type)]
        total += v if int(piece.color) == pos.turn else -v
    return total


class StubEngine:
    def __init__(self, script: dict, out: TextIO):
        self.script = script
        self.out = out
        self.position = Position.initial()
        self.history: list[str] = [position_key(self.position)]
        self.log: Optional[TextIO] = open(script["log"], "a") if script.get("log") else None

    def send(self, line: str) -> None:
        self.out.write(line + "\n")
        self.out.flush()

    def handle(self, line: str) -> bool:
        if self.log is not None:
            self.log.write(line + "\n")
            self.log.flush()
        parts = line.split()
        if not parts:
            return True
        cmd = parts[0]
        if cmd == "uci":
            if self.script.get("silent_handshake"):
                return True
            self.send(f"id name {self.script.get('name', 'stub')}")
            self.send("id author nobody")
            for name in self.script.get("options", ["Hash", "Threads"]):
                self.send(f"option name {name} type spin default 0 min -1000 max 100000")
            self.send("uciok")
        elif cmd == "isready":
            self.send("readyok")
        elif cmd == "position":
            self.set_position(parts[1:])
        elif cmd == "go":
            if self.script.get("die_on_go"):
                return False
            self.go(parts[1:])
        elif cmd == "quit":
            return False
        return True

    def set_position(self, args: list[str]) -> None:
        if args[0] == "startpos":
            pos = Position.initial()
            rest = args[1:]
        else:
            end = args.index("moves") if "moves" in args else len(args)
            pos = parse_fen(" ".join(args[1:end]))
            rest = args[end:]
        history = [position_key(pos)]
        if rest and rest[0] == "moves":
            for text in rest[1:]:
                pos = pos.play(parse_uci(pos, text))
                history.append(position_key(pos))
        self.position = pos
        self.history = history

    def go(self, args: list[str]) -> None:
        depth = 1
        allowed: Optional[list[str]] = None
        if "depth" in args:
            depth = int(args[args.index("depth") + 1])
        if "searchmoves" in args:
            allowed = args[args.index("searchmoves") + 1:]
        pos = self.position
        key = position_key(pos)
        raw = self.script.get("bestmove", {}).get(key)
        legal = {m.uci(): m for m in pos.legal_moves()}
        choices = [u for u in (allowed if allowed is not None else sorted(legal)) if u in legal]
        move = None
        for u in self.script.get("moves", {}).get(key, []):
            if u in choices:
                move = u
                break
        policy = self.script.get("policy", "material")
        if move is None and choices and policy == "repeat":
            seen = {k: self.history.count(k) for k in set(self.history)}
            scored = [(seen.get(position_key(pos.play(legal[u])), 0), u) for u in choices]
            top = max(n for n, _ in scored)
            if top:
                move = min(u for n, u in scored if n == top)
        if move is None and choices:
            if policy == "first":
                move = choices[0]
            else:
                move = max(choices, key=lambda u: (-material(pos.play(legal[u])), _tiebreak(key, u)))
        score = self.script.get("scores", {}).get(key)
        if score is None:
            score = f"cp {material(pos)}"
        pv = f" pv {move}" if move else ""
        self.send(f"info depth {depth} score {score} nodes 1{pv}")
        if raw is not None:
            self.send(raw)
        else:
            self.send(f"bestmove {move or '(none)'}")


def _tiebreak(key: str, move: str) -> int:
    # stable pseudo-random order so unscripted play is not trivially repetitive
    h = 2166136261
    for ch in key + move:
        h = ((h ^ ord(ch)) * 16777619) & 0xFFFFFFFF
    return h


def main(argv: Optional[list[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    script: dict = {}
    if argv:
        with open(argv[0]) as fh:
            script = json.load(fh)
    engine = StubEngine(script, sys.stdout)
    for line in sys.stdin:
        if not engine.handle(line.strip()):
            break
    return 0


if __name__ == "__main__":
    sys.exit(main())
