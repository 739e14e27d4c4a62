"""Game histories, repetition identity and termination under both rule sets."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional

from .position import Color, IllegalMoveError, Move, Position


class RuleSet(Enum):
    STANDARD = "standard"
    ARR = "arr"


class Status(Enum):
    ONGOING = "Ongoing"
    FINISHED = "Finished"


class Result(Enum):
    WHITE_WIN = "WhiteWin"
    BLACK_WIN = "BlackWin"
    DRAW = "Draw"

    @property
    def pgn(self) -> str:
        return {"WhiteWin": "1-0", "BlackWin": "0-1", "Draw": "1/2-1/2"}[self.value]

    @classmethod
    def from_pgn(cls, token: str) -> Optional["Result"]:
        return {"1-0": cls.WHITE_WIN, "0-1": cls.BLACK_WIN, "1/2-1/2": cls.DRAW}.get(token)


class Cause(Enum):
    CHECKMATE = "Checkmate"
    STALEMATE = "Stalemate"
    INSUFFICIENT_MATERIAL = "InsufficientMaterial"
    FIFTY_MOVE = "FiftyMove"
    THREEFOLD_REPETITION = "ThreefoldRepetition"
    AGREEMENT = "Agreement"
    ADJUDICATION = "Adjudication"


class GameOverError(RuntimeError):
    """A move was pushed onto a finished game."""


class RepetitionKey:
    """Repetition identity of a position.

    Equality requires both the 64-bit hash and the reduced position to match,
    so a hash collision can never merge two different positions.
    """

    __slots__ = ("hash", "reduced")

    def __init__(self, hash_value: int, reduced: tuple) -> None:
        self.hash = hash_value
        self.reduced = reduced

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RepetitionKey):
            return NotImplemented
        return self.hash == other.hash and self.reduced == other.reduced

    def __hash__(self) -> int:
        return self.hash

    def __repr__(self) -> str:
        return f"RepetitionKey({self.hash:016x})"


def repetition_key(pos: Position) -> RepetitionKey:
    return RepetitionKey(pos.zobrist, pos.reduced())


@dataclass(frozen=True)
class TerminationVerdict:
    status: Status
    result: Optional[Result] = None
    cause: Optional[Cause] = None
    repetition_completer: Optional[Color] = None

    @property
    def finished(self) -> bool:
        return self.status is Status.FINISHED

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "result": self.result.value if self.result else None,
            "cause": self.cause.value if self.cause else None,
            "completer": _color_name(self.repetition_completer),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TerminationVerdict":
        completer = data.get("completer")
        return cls(
            Status(data["status"]),
            Result(data["result"]) if data.get("result") else None,
            Cause(data["cause"]) if data.get("cause") else None,
            {"White": Color.WHITE, "Black": Color.BLACK}.get(completer) if completer else None,
        )


ONGOING = TerminationVerdict(Status.ONGOING)


def _color_name(color: Optional[Color]) -> Optional[str]:
    if color is None:
        return None
    return "White" if color == Color.WHITE else "Black"


def finished(result: Result, cause: Cause, completer: Optional[Color] = None) -> TerminationVerdict:
    return TerminationVerdict(Status.FINISHED, result, cause, completer)


def apply_ruleset(verdict: TerminationVerdict, rules: RuleSet) -> TerminationVerdict:
    """Rescore a standard verdict under `rules`.

    Under ARR the only verdict that changes is a threefold repetition whose
    third occurrence was produced by a White move: it becomes a Black win.
    """
    if (
        rules is RuleSet.ARR
        and verdict.cause is Cause.THREEFOLD_REPETITION
        and verdict.repetition_completer == Color.WHITE
    ):
        return TerminationVerdict(Status.FINISHED, Result.BLACK_WIN, verdict.cause, Color.WHITE)
    return verdict


class GameState:
    """A position plus its history, as a persistent linked list.

    Pushing a move returns a new state that shares its ancestors with the
    old one, so states have value semantics at O(1) copy cost.
    """

    __slots__ = ("position", "key", "parent", "ply", "last_move", "count")

    def __init__(
        self,
        position: Position,
        _parent: Optional["GameState"] = None,
        _last_move: Optional[Move] = None,
        _key: Optional[RepetitionKey] = None,
    ) -> None:
        self.position = position
        self.key = _key if _key is not None else repetition_key(position)
        self.parent = _parent
        self.ply = 0 if _parent is None else _parent.ply + 1
        self.last_move = _last_move
        self.count = 1 + self._earlier_occurrences()

    @classmethod
    def initial(cls) -> "GameState":
        return cls(Position.initial())

    def _earlier_occurrences(self) -> int:
        # A capture or pawn move makes every earlier position unreachable, so
        # only the reversible window (same side to move) needs scanning.
        n = 0
        window = self.position.halfmove_clock
        node = self.parent
        step = 1
        key = self.key
        h = key.hash
        while node is not None and step <= window:
            if step % 2 == 0 and node.key.hash == h and node.key == key:
                n = node.count
                break
            node = node.parent
            step += 1
        return n

    def push(self, move: Move, check: bool = True) -> "GameState":
        if check:
            if self.verdict(RuleSet.STANDARD).finished:
                raise GameOverError("game already finished")
            if move not in self.position.legal_moves():
                raise IllegalMoveError(f"illegal move {move.uci()} in {self.position.fen()}")
        return GameState(self.position.play(move), self, move)

    def history(self) -> list["GameState"]:
        """States from the start of the game up to and including this one."""
        out = []
        node: Optional[GameState] = self
        while node is not None:
            out.append(node)
            node = node.parent
        out.reverse()
        return out

    def keys(self) -> list[RepetitionKey]:
        return [s.key for s in self.history()]

    def moves(self) -> list[Move]:
        return [s.last_move for s in self.history()[1:]]  # type: ignore[misc]

    def occurrences(self) -> dict[RepetitionKey, int]:
        table: dict[RepetitionKey, int] = {}
        for k in self.keys():
            table[k] = table.get(k, 0) + 1
        return table

    def __iter__(self) -> Iterator["GameState"]:
        return iter(self.history())

    def verdict(self, rules: RuleSet = RuleSet.STANDARD) -> TerminationVerdict:
        return classify_termination(self, rules)


def push_move(state: GameState, move: Move) -> GameState:
    return state.push(move)


def standard_verdict(state: GameState, legal: Optional[list[Move]] = None) -> TerminationVerdict:
    pos = state.position
    if legal is None:
        legal = pos.legal_moves()
    if not legal:
        if pos.is_check():
            winner = Result.BLACK_WIN if pos.turn == 0 else Result.WHITE_WIN
            return finished(winner, Cause.CHECKMATE)
        return finished(Result.DRAW, Cause.STALEMATE)
    if state.count >= 3:
        return finished(Result.DRAW, Cause.THREEFOLD_REPETITION, Color(pos.turn ^ 1))
    if pos.is_insufficient_material():
        return finished(Result.DRAW, Cause.INSUFFICIENT_MATERIAL)
    if pos.halfmove_clock >= 100:
        return finished(Result.DRAW, Cause.FIFTY_MOVE)
    return ONGOING


def classify_termination(state: GameState, rules: RuleSet = RuleSet.STANDARD) -> TerminationVerdict:
    """Verdict for the current state; the repetition completer is the side that just moved."""
    return apply_ruleset(standard_verdict(state), rules)
