"""Move-tree node counting."""

from __future__ import annotations

from .position import Position

MAX_PERFT_DEPTH = 7


def perft(pos: Position, depth: int) -> int:
    """Number of leaf nodes of the legal-move tree of the given depth."""
    if depth < 0 or depth > MAX_PERFT_DEPTH:
        raise ValueError(f"perft depth must be in 0..{MAX_PERFT_DEPTH}")
    if depth == 0:
        return 1
    return _perft(pos, depth)


def _perft(pos: Position, depth: int) -> int:
    moves = pos.legal_moves()
    if depth == 1:
        return len(moves)
    play = pos.play
    return sum(_perft(play(m), depth - 1) for m in moves)


def divide(pos: Position, depth: int) -> dict[str, int]:
    """Per-root-move node counts, keyed by UCI move."""
    if depth < 1:
        raise ValueError("divide needs depth >= 1")
    return {m.uci(): perft(pos.play(m), depth - 1) for m in pos.legal_moves()}
