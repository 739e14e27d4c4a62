"""Chess rules: positions, moves, repetition identity and termination."""

from .game import (
    Cause,
    GameOverError,
    GameState,
    RepetitionKey,
    Result,
    RuleSet,
    Status,
    TerminationVerdict,
    apply_ruleset,
    classify_termination,
    push_move,
    repetition_key,
)
from .notation import NotationError, parse_san, parse_uci, san
from .perft import divide, perft
from .position import (
    BLACK,
    STARTING_FEN,
    WHITE,
    Color,
    FenError,
    IllegalMoveError,
    Move,
    MoveKind,
    Piece,
    PieceType,
    Position,
    apply_move,
    legal_moves,
    parse_fen,
    to_fen,
)

__all__ = [
    "BLACK",
    "Cause",
    "Color",
    "FenError",
    "GameOverError",
    "GameState",
    "IllegalMoveError",
    "Move",
    "MoveKind",
    "NotationError",
    "Piece",
    "PieceType",
    "Position",
    "RepetitionKey",
    "Result",
    "RuleSet",
    "STARTING_FEN",
    "Status",
    "TerminationVerdict",
    "WHITE",
    "apply_move",
    "apply_ruleset",
    "classify_termination",
    "divide",
    "legal_moves",
    "parse_fen",
    "parse_san",
    "parse_uci",
    "perft",
    "push_move",
    "repetition_key",
    "san",
    "to_fen",
]
