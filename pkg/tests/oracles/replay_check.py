"""Independent replay of self-play logs with the naive board."""

from oracles.naive_chess import NaiveBoard, play_uci, repetition_identity


def third_occurrences(opening_fen: str, moves: list[str]):
    """(ply, mover_is_white) for every move that makes some position's third occurrence."""
    board = NaiveBoard(opening_fen)
    counts = {repetition_identity(board): 1}
    hits = []
    for ply, text in enumerate(moves):
        mover_white = board.white
        board = play_uci(board, text)
        key = repetition_identity(board)
        counts[key] = counts.get(key, 0) + 1
        if counts[key] == 3:
            hits.append((ply, mover_white))
    return hits, board, counts


def forced_at_end(opening_fen: str, moves: list[str]) -> bool:
    """True when every legal White move at the last position would make a third occurrence."""
    board = NaiveBoard(opening_fen)
    counts = {repetition_identity(board): 1}
    for text in moves[:-1]:
        board = play_uci(board, text)
        k = repetition_identity(board)
        counts[k] = counts.get(k, 0) + 1
    if not board.white:
        return False
    legal = board.legal_moves()
    return bool(legal) and all(counts.get(repetition_identity(after), 0) == 2 for *_, after in legal)
