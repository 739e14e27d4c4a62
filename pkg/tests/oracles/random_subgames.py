"""Seeded random chess subgames for solver cross-checks."""

import random

from arrchess.core import parse_fen
from arrchess.solver import BuildLimits, build_subgame, position_key_text

MATERIAL = ["KQk", "KRk", "KPk", "KRkp", "KBkp", "KNkp", "KQkr", "KRkn", "KRkb", "KPkp", "KBNk", "KRkr", "KNNk"]


def random_position(rng: random.Random):
    while True:
        pieces = rng.choice(MATERIAL)
        squares = rng.sample(range(64), len(pieces))
        if any(p in "Pp" and sq // 8 in (0, 7) for p, sq in zip(pieces, squares)):
            continue
        board = dict(zip(squares, pieces))
        rows = []
        for rank in range(7, -1, -1):
            row, empty = "", 0
            for f in range(8):
                p = board.get(rank * 8 + f)
                if p is None:
                    empty += 1
                    continue
                if empty:
                    row += str(empty)
                    empty = 0
                row += p
            rows.append(row + (str(empty) if empty else ""))
        fen = "/".join(rows) + " " + rng.choice("wb") + " - - 0 1"
        try:
            pos = parse_fen(fen)
        except ValueError:
            continue
        if pos.legal_moves():
            return pos


def sparse_whitelist(seed: int, k: int):
    """Each position keeps between 1 and k of its legal moves, chosen by a keyed RNG."""

    def allowed(pos):
        moves = sorted(m.uci() for m in pos.legal_moves())
        r = random.Random(f"{seed}|{position_key_text(pos)}")
        return r.sample(moves, min(len(moves), r.randint(1, k)))

    return allowed


def random_subgame(rng: random.Random, index: int, max_vertices: int = 10_000):
    """Either the full move graph with a small vertex budget or a sparse whitelisted one."""
    pos = random_position(rng)
    if rng.random() < 0.35:
        limit = rng.choice([20, 60, 200, 600])
        return build_subgame(pos, BuildLimits(max_vertices=min(limit, max_vertices)))
    k = rng.choice([1, 2, 2, 3, 4])
    limit = rng.choice([100, 1000, max_vertices])
    return build_subgame(pos, BuildLimits(max_vertices=min(limit, max_vertices), whitelist=sparse_whitelist(index, k)))
