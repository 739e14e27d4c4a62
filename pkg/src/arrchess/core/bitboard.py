"""Precomputed attack tables.

Squares are numbered 0 (a1) to 63 (h8), rank-major.  Slider attacks are
looked up per line (rank, file, diagonal, anti-diagonal) in dictionaries
keyed by the masked occupancy of that line.
"""

from __future__ import annotations

FILE_NAMES = "abcdefgh"
RANK_NAMES = "12345678"
SQUARE_NAMES = [f + r for r in RANK_NAMES for f in FILE_NAMES]
ALL = (1 << 64) - 1

FILE_A = 0x0101010101010101
FILE_H = FILE_A << 7
RANK_1 = 0xFF
RANK_2 = RANK_1 << 8
RANK_3 = RANK_1 << 16
RANK_4 = RANK_1 << 24
RANK_5 = RANK_1 << 32
RANK_6 = RANK_1 << 40
RANK_7 = RANK_1 << 48
RANK_8 = RANK_1 << 56
LIGHT_SQUARES = 0x55AA55AA55AA55AA
DARK_SQUARES = ALL ^ LIGHT_SQUARES


def square(file: int, rank: int) -> int:
    return rank * 8 + file


def parse_square(name: str) -> int:
    if len(name) != 2 or name[0] not in FILE_NAMES or name[1] not in RANK_NAMES:
        raise ValueError(f"invalid square name: {name!r}")
    return FILE_NAMES.index(name[0]) + 8 * RANK_NAMES.index(name[1])


def bits(bb: int):
    """Yield set square indices in ascending order."""
    while bb:
        low = bb & -bb
        yield low.bit_length() - 1
        bb ^= low


def popcount(bb: int) -> int:
    return bin(bb).count("1")


def _step_table(deltas):
    table = []
    for sq in range(64):
        f, r = sq & 7, sq >> 3
        bb = 0
        for df, dr in deltas:
            nf, nr = f + df, r + dr
            if 0 <= nf < 8 and 0 <= nr < 8:
                bb |= 1 << (nr * 8 + nf)
        table.append(bb)
    return table


KNIGHT = _step_table([(1, 2), (2, 1), (2, -1), (1, -2), (-1, -2), (-2, -1), (-2, 1), (-1, 2)])
KING = _step_table([(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)])
# PAWN_ATTACKS[color][sq]: squares attacked by a pawn of `color` standing on sq.
PAWN_ATTACKS = [_step_table([(-1, 1), (1, 1)]), _step_table([(-1, -1), (1, -1)])]


def _ray_attacks(sq: int, occ: int, deltas) -> int:
    f, r = sq & 7, sq >> 3
    bb = 0
    for df, dr in deltas:
        nf, nr = f + df, r + dr
        while 0 <= nf < 8 and 0 <= nr < 8:
            t = 1 << (nr * 8 + nf)
            bb |= t
            if occ & t:
                break
            nf += df
            nr += dr
    return bb


def _subsets(mask: int):
    sub = 0
    while True:
        yield sub
        sub = (sub - mask) & mask
        if sub == 0:
            return


EDGES = FILE_A | FILE_H | RANK_1 | RANK_8


def _line_table(deltas, edge):
    masks = []
    tables = []
    for sq in range(64):
        # a blocker on the far edge of the line never hides another square
        inner = _ray_attacks(sq, 0, deltas) & ~edge
        masks.append(inner)
        tables.append({sub: _ray_attacks(sq, sub, deltas) for sub in _subsets(inner)})
    return masks, tables


RANK_MASK, RANK_ATTACKS = _line_table([(1, 0), (-1, 0)], FILE_A | FILE_H)
FILE_MASK, FILE_ATTACKS = _line_table([(0, 1), (0, -1)], RANK_1 | RANK_8)
DIAG_MASK, DIAG_ATTACKS = _line_table([(1, 1), (-1, -1)], EDGES)
ANTI_MASK, ANTI_ATTACKS = _line_table([(1, -1), (-1, 1)], EDGES)

ROOK_EMPTY = [RANK_ATTACKS[s][0] | FILE_ATTACKS[s][0] for s in range(64)]
BISHOP_EMPTY = [DIAG_ATTACKS[s][0] | ANTI_ATTACKS[s][0] for s in range(64)]


def rook_attacks(sq: int, occ: int) -> int:
    return RANK_ATTACKS[sq][occ & RANK_MASK[sq]] | FILE_ATTACKS[sq][occ & FILE_MASK[sq]]


def bishop_attacks(sq: int, occ: int) -> int:
    return DIAG_ATTACKS[sq][occ & DIAG_MASK[sq]] | ANTI_ATTACKS[sq][occ & ANTI_MASK[sq]]


def _between_and_line():
    between = [[0] * 64 for _ in range(64)]
    line = [[0] * 64 for _ in range(64)]
    for a in range(64):
        for b in range(64):
            if a == b:
                continue
            for att, empty in ((rook_attacks, ROOK_EMPTY), (bishop_attacks, BISHOP_EMPTY)):
                if empty[a] >> b & 1:
                    between[a][b] = att(a, 1 << b) & att(b, 1 << a)
                    line[a][b] = (empty[a] & empty[b]) | (1 << a) | (1 << b)
    return between, line


BETWEEN, LINE = _between_and_line()
