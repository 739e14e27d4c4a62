"""Immutable chess positions, legal move generation and FEN I/O."""

from __future__ import annotations

import random
from enum import IntEnum
from typing import NamedTuple, Optional

from .bitboard import (
    ALL,
    ANTI_ATTACKS,
    ANTI_MASK,
    BETWEEN,
    BISHOP_EMPTY,
    DARK_SQUARES,
    DIAG_ATTACKS,
    DIAG_MASK,
    FILE_ATTACKS,
    FILE_MASK,
    FILE_NAMES,
    KING,
    KNIGHT,
    LIGHT_SQUARES,
    LINE,
    PAWN_ATTACKS,
    RANK_1,
    RANK_8,
    RANK_ATTACKS,
    RANK_MASK,
    ROOK_EMPTY,
    SQUARE_NAMES,
    bits,
    parse_square,
)


class Color(IntEnum):
    WHITE = 0
    BLACK = 1

    @property
    def other(self) -> "Color":
        return Color(self ^ 1)

    @property
    def letter(self) -> str:
        return "w" if self == Color.WHITE else "b"


class PieceType(IntEnum):
    PAWN = 1
    KNIGHT = 2
    BISHOP = 3
    ROOK = 4
    QUEEN = 5
    KING = 6


class MoveKind(IntEnum):
    NORMAL = 0
    CAPTURE = 1
    CASTLE = 2
    EN_PASSANT = 3
    PROMOTION = 4


WHITE, BLACK = 0, 1
PAWN, KNIGHT_T, BISHOP, ROOK, QUEEN, KING_T = 1, 2, 3, 4, 5, 6
NORMAL, CAPTURE, CASTLE, EN_PASSANT, PROMOTION = 0, 1, 2, 3, 4

PIECE_SYMBOLS = " pnbrqk"
WK, WQ, BK, BQ = 1, 2, 4, 8
STARTING_FEN = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"


class FenError(ValueError):
    """Raised for malformed or impossible FEN records."""


class IllegalMoveError(ValueError):
    """Raised when a move is not legal in the position it is applied to."""


class Piece(NamedTuple):
    piece_type: PieceType
    color: Color

    def symbol(self) -> str:
        s = PIECE_SYMBOLS[self.piece_type]
        return s.upper() if self.color == Color.WHITE else s


class Move(NamedTuple):
    from_square: int
    to_square: int
    promotion: Optional[PieceType] = None
    kind: MoveKind = MoveKind.NORMAL

    def uci(self) -> str:
        s = SQUARE_NAMES[self.from_square] + SQUARE_NAMES[self.to_square]
        if self.promotion:
            s += PIECE_SYMBOLS[self.promotion]
        return s

    def __str__(self) -> str:
        return self.uci()


# Interned move objects: move generation only ever indexes these tables.
_MOVES = [[Move(f, t, None, MoveKind(k)) for f in range(64) for t in range(64)] for k in range(4)]
_PROMOS: dict[tuple[int, int, int], Move] = {}
for _f in range(64):
    for _t in range(64):
        if abs((_f >> 3) - (_t >> 3)) == 1 and abs((_f & 7) - (_t & 7)) <= 1 and (_t >> 3) in (0, 7):
            for _p in (QUEEN, ROOK, BISHOP, KNIGHT_T):
                _PROMOS[_f, _t, _p] = Move(_f, _t, PieceType(_p), MoveKind.PROMOTION)
_PROMO_ORDER = (QUEEN, ROOK, BISHOP, KNIGHT_T)

# rights that survive a move touching the square
_CASTLE_KEEP = [15] * 64
_CASTLE_KEEP[4] = 15 & ~(WK | WQ)
_CASTLE_KEEP[0] = 15 & ~WQ
_CASTLE_KEEP[7] = 15 & ~WK
_CASTLE_KEEP[60] = 15 & ~(BK | BQ)
_CASTLE_KEEP[56] = 15 & ~BQ
_CASTLE_KEEP[63] = 15 & ~BK

# Zobrist keys.  The seed is part of the on-disk key format: bump the version
# together with it.
ZOBRIST_VERSION = 1
_rng = random.Random(0xA22C0DE0 + ZOBRIST_VERSION)
_Z_PIECE = [[0] * 64 for _ in range(16)]
for _code in [p | (c << 3) for c in (0, 1) for p in range(1, 7)]:
    _Z_PIECE[_code] = [_rng.getrandbits(64) for _ in range(64)]
_Z_CASTLE_BITS = [_rng.getrandbits(64) for _ in range(4)]
_Z_CASTLE = [0] * 16
for _m in range(16):
    for _i in range(4):
        if _m >> _i & 1:
            _Z_CASTLE[_m] ^= _Z_CASTLE_BITS[_i]
_Z_EP_FILE = [_rng.getrandbits(64) for _ in range(8)]
_Z_BLACK = _rng.getrandbits(64)
del _rng


def _rook_att(sq: int, occ: int) -> int:
    return RANK_ATTACKS[sq][occ & RANK_MASK[sq]] | FILE_ATTACKS[sq][occ & FILE_MASK[sq]]


def _bishop_att(sq: int, occ: int) -> int:
    return DIAG_ATTACKS[sq][occ & DIAG_MASK[sq]] | ANTI_ATTACKS[sq][occ & ANTI_MASK[sq]]


_INITIAL: Optional["Position"] = None


class Position:
    """A full board state.

    Instances are immutable values: every mutating operation returns a new
    Position.  The en-passant square is canonical, i.e. it is only recorded
    when the side to move has a legal en-passant capture.
    """

    __slots__ = ("_bb", "_occ", "_board", "turn", "castling", "ep", "halfmove_clock", "fullmove_number", "_hash")

    # ------------------------------------------------------------------ FEN

    @classmethod
    def initial(cls) -> "Position":
        global _INITIAL
        if _INITIAL is None:
            _INITIAL = parse_fen(STARTING_FEN)
        return _INITIAL

    def fen(self) -> str:
        rows = []
        board = self._board
        for rank in range(7, -1, -1):
            row = ""
            empty = 0
            for file in range(8):
                code = board[rank * 8 + file]
                if not code:
                    empty += 1
                    continue
                if empty:
                    row += str(empty)
                    empty = 0
                s = PIECE_SYMBOLS[code & 7]
                row += s if code >> 3 else s.upper()
            if empty:
                row += str(empty)
            rows.append(row)
        return " ".join(
            [
                "/".join(rows),
                "w" if self.turn == WHITE else "b",
                self.castling_fen(),
                SQUARE_NAMES[self.ep] if self.ep >= 0 else "-",
                str(self.halfmove_clock),
                str(self.fullmove_number),
            ]
        )

    def castling_fen(self) -> str:
        s = "".join(ch for bit, ch in ((WK, "K"), (WQ, "Q"), (BK, "k"), (BQ, "q")) if self.castling & bit)
        return s or "-"

    # ------------------------------------------------------------ accessors

    @property
    def side_to_move(self) -> Color:
        return Color(self.turn)

    @property
    def en_passant_square(self) -> Optional[int]:
        return self.ep if self.ep >= 0 else None

    @property
    def castling_rights(self) -> str:
        return self.castling_fen()

    @property
    def zobrist(self) -> int:
        return self._hash

    def piece_at(self, sq: int) -> Optional[Piece]:
        code = self._board[sq]
        if not code:
            return None
        return Piece(PieceType(code & 7), Color(code >> 3))

    def placement(self) -> dict[int, Piece]:
        return {sq: Piece(PieceType(c & 7), Color(c >> 3)) for sq, c in enumerate(self._board) if c}

    def pieces(self, piece_type: int, color: int) -> int:
        """Bitboard of the given piece type and color."""
        return self._bb[piece_type] & self._occ[color]

    def occupied(self) -> int:
        return self._occ[0] | self._occ[1]

    def piece_count(self) -> int:
        return bin(self._occ[0] | self._occ[1]).count("1")

    def king_square(self, color: int) -> int:
        return (self._bb[KING_T] & self._occ[color]).bit_length() - 1

    def reduced(self) -> tuple:
        """Repetition identity: placement, side to move, castling, en passant."""
        bb = self._bb
        return (bb[1], bb[2], bb[3], bb[4], bb[5], bb[6], self._occ[0], self.turn, self.castling, self.ep)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Position):
            return NotImplemented
        return (
            self.reduced() == other.reduced()
            and self.halfmove_clock == other.halfmove_clock
            and self.fullmove_number == other.fullmove_number
        )

    def __hash__(self) -> int:
        return hash((self._hash, self.halfmove_clock, self.fullmove_number))

    def __repr__(self) -> str:
        return f"Position({self.fen()!r})"

    # -------------------------------------------------------------- attacks

    def attackers(self, color: int, sq: int, occ: Optional[int] = None) -> int:
        """Bitboard of `color` pieces attacking `sq` given occupancy `occ`."""
        if occ is None:
            occ = self._occ[0] | self._occ[1]
        bb = self._bb
        queens = bb[QUEEN]
        return (
            (KNIGHT[sq] & bb[KNIGHT_T])
            | (KING[sq] & bb[KING_T])
            | (PAWN_ATTACKS[color ^ 1][sq] & bb[PAWN])
            | (_rook_att(sq, occ) & (bb[ROOK] | queens))
            | (_bishop_att(sq, occ) & (bb[BISHOP] | queens))
        ) & self._occ[color]

    def is_attacked(self, color: int, sq: int) -> bool:
        return bool(self.attackers(color, sq))

    def checkers(self) -> int:
        return self.attackers(self.turn ^ 1, self.king_square(self.turn))

    def is_check(self) -> bool:
        return bool(self.checkers())

    def _pinned(self, us: int, ksq: int, occ: int) -> int:
        bb = self._bb
        theirs = self._occ[us ^ 1]
        queens = bb[QUEEN]
        snipers = ((ROOK_EMPTY[ksq] & (bb[ROOK] | queens)) | (BISHOP_EMPTY[ksq] & (bb[BISHOP] | queens))) & theirs
        pinned = 0
        ours = self._occ[us]
        while snipers:
            low = snipers & -snipers
            snipers ^= low
            b = BETWEEN[ksq][low.bit_length() - 1] & occ
            if b and not (b & (b - 1)) and b & ours:
                pinned |= b
        return pinned

    # ------------------------------------------------------ move generation

    def legal_moves(self) -> list[Move]:
        """All legal moves in a fixed, deterministic order."""
        out: list[Move] = []
        us = self.turn
        them = us ^ 1
        bb = self._bb
        ours = self._occ[us]
        theirs = self._occ[them]
        occ = ours | theirs
        ksq = (bb[KING_T] & ours).bit_length() - 1
        checkers = self.attackers(them, ksq, occ)
        normal = _MOVES[NORMAL]
        capture = _MOVES[CAPTURE]

        # king steps: test the destination with the king lifted off the board
        occ_noking = occ ^ (1 << ksq)
        base = ksq * 64
        t = KING[ksq] & ~ours
        while t:
            low = t & -t
            t ^= low
            to = low.bit_length() - 1
            if not self.attackers(them, to, occ_noking):
                out.append(capture[base + to] if theirs & low else normal[base + to])

        if checkers & (checkers - 1):
            return out
        if checkers:
            target = BETWEEN[ksq][checkers.bit_length() - 1] | checkers
        else:
            target = ALL
            self._castling_moves(out, us, ksq, occ)

        pinned = self._pinned(us, ksq, occ)
        line = LINE[ksq]
        dest = ~ours & target
        queens = bb[QUEEN]

        pieces = bb[KNIGHT_T] & ours & ~pinned
        while pieces:
            low = pieces & -pieces
            pieces ^= low
            frm = low.bit_length() - 1
            base = frm * 64
            t = KNIGHT[frm] & dest
            while t:
                lt = t & -t
                t ^= lt
                to = lt.bit_length() - 1
                out.append(capture[base + to] if theirs & lt else normal[base + to])

        for pieces, att in (((bb[BISHOP] | queens) & ours, _bishop_att), ((bb[ROOK] | queens) & ours, _rook_att)):
            while pieces:
                low = pieces & -pieces
                pieces ^= low
                frm = low.bit_length() - 1
                base = frm * 64
                t = att(frm, occ) & dest
                if pinned & low:
                    t &= line[frm]
                while t:
                    lt = t & -t
                    t ^= lt
                    to = lt.bit_length() - 1
                    out.append(capture[base + to] if theirs & lt else normal[base + to])

        self._pawn_moves(out, us, bb[PAWN] & ours, theirs, occ, target, pinned, line)

        if self.ep >= 0:
            self._ep_moves(out, us, ksq, occ)
        return out

    def _pawn_moves(self, out, us, pawns, theirs, occ, target, pinned, line) -> None:
        normal = _MOVES[NORMAL]
        capture = _MOVES[CAPTURE]
        promos = _PROMOS
        if us == WHITE:
            step, start_lo, start_hi, last_lo = 8, 8, 15, 56
        else:
            step, start_lo, start_hi, last_lo = -8, 48, 55, 0
        att_table = PAWN_ATTACKS[us]
        while pawns:
            low = pawns & -pawns
            pawns ^= low
            frm = low.bit_length() - 1
            allowed = target
            if pinned & low:
                allowed &= line[frm]
            base = frm * 64
            to = frm + step
            last = last_lo <= to < last_lo + 8
            if not occ >> to & 1:
                if allowed >> to & 1:
                    if last:
                        for p in _PROMO_ORDER:
                            out.append(promos[frm, to, p])
                    else:
                        out.append(normal[base + to])
                if start_lo <= frm <= start_hi:
                    to2 = to + step
                    if not occ >> to2 & 1 and allowed >> to2 & 1:
                        out.append(normal[base + to2])
            t = att_table[frm] & theirs & allowed
            while t:
                lt = t & -t
                t ^= lt
                to = lt.bit_length() - 1
                if last:
                    for p in _PROMO_ORDER:
                        out.append(promos[frm, to, p])
                else:
                    out.append(capture[base + to])

    def _castling_moves(self, out, us, ksq, occ) -> None:
        rights = self.castling
        if us == WHITE:
            if not rights & (WK | WQ):
                return
            king_side, queen_side, k_from = WK, WQ, 4
        else:
            if not rights & (BK | BQ):
                return
            king_side, queen_side, k_from = BK, BQ, 60
        them = us ^ 1
        castle = _MOVES[CASTLE]
        if rights & king_side:
            f, g = k_from + 1, k_from + 2
            if not occ & ((1 << f) | (1 << g)) and not self.attackers(them, f, occ) and not self.attackers(them, g, occ):
                out.append(castle[k_from * 64 + g])
        if rights & queen_side:
            d, c, b = k_from - 1, k_from - 2, k_from - 3
            if (
                not occ & ((1 << d) | (1 << c) | (1 << b))
                and not self.attackers(them, d, occ)
                and not self.attackers(them, c, occ)
            ):
                out.append(castle[k_from * 64 + c])

    def _ep_capturers(self, us: int, ep: int) -> list[int]:
        """Origins of legal en-passant captures onto `ep` for side `us`."""
        bb = self._bb
        them = us ^ 1
        ours = self._occ[us]
        theirs = self._occ[them]
        ksq = (bb[KING_T] & ours).bit_length() - 1
        victim = ep - 8 if us == WHITE else ep + 8
        result = []
        for frm in bits(PAWN_ATTACKS[them][ep] & bb[PAWN] & ours):
            occ = ((ours | theirs) ^ (1 << frm) ^ (1 << victim)) | (1 << ep)
            enemy = theirs ^ (1 << victim)
            queens = bb[QUEEN]
            attacked = (
                (KNIGHT[ksq] & bb[KNIGHT_T])
                | (PAWN_ATTACKS[us][ksq] & bb[PAWN])
                | (_rook_att(ksq, occ) & (bb[ROOK] | queens))
                | (_bishop_att(ksq, occ) & (bb[BISHOP] | queens))
            ) & enemy
            if not attacked:
                result.append(frm)
        return result

    def _ep_moves(self, out, us, ksq, occ) -> None:
        ep_moves = _MOVES[EN_PASSANT]
        for frm in self._ep_capturers(us, self.ep):
            out.append(ep_moves[frm * 64 + self.ep])

    def has_legal_move(self) -> bool:
        return bool(self.legal_moves())

    def is_checkmate(self) -> bool:
        return self.is_check() and not self.legal_moves()

    def is_stalemate(self) -> bool:
        return not self.is_check() and not self.legal_moves()

    def is_insufficient_material(self) -> bool:
        """K v K, K+minor v K, and K+B v K+B with bishops on one square color."""
        bb = self._bb
        if bb[PAWN] | bb[ROOK] | bb[QUEEN]:
            return False
        minors = bb[KNIGHT_T] | bb[BISHOP]
        if not minors:
            return True
        if not minors & (minors - 1):
            return True
        if bb[KNIGHT_T] or bin(minors).count("1") != 2:
            return False
        w, b = bb[BISHOP] & self._occ[0], bb[BISHOP] & self._occ[1]
        if not w or not b:
            return False
        return bool(minors & LIGHT_SQUARES) != bool(minors & DARK_SQUARES)

    # ------------------------------------------------------------- make move

    def play(self, move: Move) -> "Position":
        """Apply a move without a legality check (caller guarantees legality)."""
        new = object.__new__(Position)
        bb = self._bb[:]
        occ = self._occ[:]
        board = self._board[:]
        us = self.turn
        them = us ^ 1
        frm, to = move.from_square, move.to_square
        code = board[frm]
        ptype = code & 7
        h = self._hash ^ _Z_BLACK ^ _Z_CASTLE[self.castling]
        if self.ep >= 0:
            h ^= _Z_EP_FILE[self.ep & 7]
        fbit, tbit = 1 << frm, 1 << to
        halfmove = self.halfmove_clock + 1
        captured = board[to]
        if captured:
            bb[captured & 7] ^= tbit
            occ[them] ^= tbit
            h ^= _Z_PIECE[captured][to]
            halfmove = 0
        bb[ptype] ^= fbit | tbit
        occ[us] ^= fbit | tbit
        board[frm] = 0
        board[to] = code
        h ^= _Z_PIECE[code][frm] ^ _Z_PIECE[code][to]
        new_ep = -1
        if ptype == PAWN:
            halfmove = 0
            kind = move.kind
            if kind == EN_PASSANT:
                victim = to - 8 if us == WHITE else to + 8
                vbit = 1 << victim
                vcode = board[victim]
                bb[PAWN] ^= vbit
                occ[them] ^= vbit
                board[victim] = 0
                h ^= _Z_PIECE[vcode][victim]
            elif move.promotion:
                promo = int(move.promotion)
                bb[PAWN] ^= tbit
                bb[promo] ^= tbit
                pcode = promo | (us << 3)
                board[to] = pcode
                h ^= _Z_PIECE[code][to] ^ _Z_PIECE[pcode][to]
            elif to - frm in (16, -16):
                mid = (frm + to) >> 1
                # only record the square when an enemy pawn stands beside the target
                if PAWN_ATTACKS[us][mid] & bb[PAWN] & occ[them]:
                    new_ep = mid
        elif ptype == KING_T and (to - frm == 2 or frm - to == 2):
            if to > frm:
                r_from, r_to = frm + 3, frm + 1
            else:
                r_from, r_to = frm - 4, frm - 1
            rbit = (1 << r_from) | (1 << r_to)
            rcode = board[r_from]
            bb[ROOK] ^= rbit
            occ[us] ^= rbit
            board[r_from] = 0
            board[r_to] = rcode
            h ^= _Z_PIECE[rcode][r_from] ^ _Z_PIECE[rcode][r_to]
        castling = self.castling & _CASTLE_KEEP[frm] & _CASTLE_KEEP[to]
        h ^= _Z_CASTLE[castling]
        new._bb = bb
        new._occ = occ
        new._board = board
        new.turn = them
        new.castling = castling
        new.ep = -1
        new.halfmove_clock = halfmove
        new.fullmove_number = self.fullmove_number + us
        new._hash = h
        if new_ep >= 0 and new._ep_capturers(them, new_ep):
            new.ep = new_ep
            new._hash = h ^ _Z_EP_FILE[new_ep & 7]
        return new

    def mirror(self) -> "Position":
        """Vertically flipped position with colors swapped."""
        placement = {}
        for sq, piece in self.placement().items():
            placement[sq ^ 56] = Piece(piece.piece_type, piece.color.other)
        castling = ((self.castling & 3) << 2) | (self.castling >> 2)
        ep = self.ep ^ 56 if self.ep >= 0 else -1
        return _build(placement, self.turn ^ 1, castling, ep, self.halfmove_clock, self.fullmove_number)


def _compute_hash(pos: Position) -> int:
    h = 0
    for sq, code in enumerate(pos._board):
        if code:
            h ^= _Z_PIECE[code][sq]
    if pos.turn == BLACK:
        h ^= _Z_BLACK
    h ^= _Z_CASTLE[pos.castling]
    if pos.ep >= 0:
        h ^= _Z_EP_FILE[pos.ep & 7]
    return h


def _build(placement: dict[int, Piece], turn: int, castling: int, ep: int, halfmove: int, fullmove: int) -> Position:
    pos = object.__new__(Position)
    bb = [0] * 7
    occ = [0, 0]
    board = [0] * 64
    for sq, piece in placement.items():
        bb[piece.piece_type] |= 1 << sq
        occ[piece.color] |= 1 << sq
        board[sq] = int(piece.piece_type) | (int(piece.color) << 3)
    pos._bb = bb
    pos._occ = occ
    pos._board = board
    pos.turn = turn
    pos.castling = castling
    pos.ep = -1
    pos.halfmove_clock = halfmove
    pos.fullmove_number = fullmove
    _validate(pos)
    if ep >= 0 and pos._ep_capturers(turn, ep):
        pos.ep = ep
    pos._hash = _compute_hash(pos)
    return pos


def _validate(pos: Position) -> None:
    bb, occ = pos._bb, pos._occ
    for color, name in ((WHITE, "white"), (BLACK, "black")):
        kings = bb[KING_T] & occ[color]
        if not kings:
            raise FenError(f"missing {name} king")
        if kings & (kings - 1):
            raise FenError(f"more than one {name} king")
    wk, bk = pos.king_square(WHITE), pos.king_square(BLACK)
    if KING[wk] >> bk & 1:
        raise FenError("kings on adjacent squares")
    if bb[PAWN] & (RANK_1 | RANK_8):
        raise FenError("pawn on first or last rank")
    if pos.attackers(pos.turn, pos.king_square(pos.turn ^ 1)):
        raise FenError("side not to move is in check")
    board = pos._board
    required = {WK: ((4, KING_T), (7, ROOK)), WQ: ((4, KING_T), (0, ROOK)), BK: ((60, KING_T), (63, ROOK)), BQ: ((60, KING_T), (56, ROOK))}
    for bit, squares in required.items():
        if pos.castling & bit:
            color = 0 if bit in (WK, WQ) else 1
            for sq, ptype in squares:
                if board[sq] != ptype | (color << 3):
                    raise FenError("castling rights inconsistent with placement")


def parse_fen(text: str) -> Position:
    """Parse a six-field FEN record into a canonical Position."""
    if not isinstance(text, str):
        raise FenError("FEN must be a string")
    fields = text.split()
    if len(fields) != 6:
        raise FenError(f"expected 6 FEN fields, got {len(fields)}")
    board_s, turn_s, castle_s, ep_s, half_s, full_s = fields
    rows = board_s.split("/")
    if len(rows) != 8:
        raise FenError("placement must have 8 ranks")
    placement: dict[int, Piece] = {}
    for i, row in enumerate(rows):
        rank = 7 - i
        file = 0
        prev_digit = False
        for ch in row:
            if ch in "12345678":
                if prev_digit:
                    raise FenError("consecutive digits in placement")
                file += int(ch)
                prev_digit = True
            else:
                idx = PIECE_SYMBOLS.find(ch.lower())
                if idx <= 0:
                    raise FenError(f"illegal piece character {ch!r}")
                if file >= 8:
                    raise FenError("rank overflows 8 files")
                color = Color.WHITE if ch.isupper() else Color.BLACK
                placement[rank * 8 + file] = Piece(PieceType(idx), color)
                file += 1
                prev_digit = False
        if file != 8:
            raise FenError(f"rank {rank + 1} does not have 8 files")
    if turn_s not in ("w", "b"):
        raise FenError(f"bad side to move {turn_s!r}")
    turn = WHITE if turn_s == "w" else BLACK
    castling = 0
    if castle_s != "-":
        for ch in castle_s:
            bit = {"K": WK, "Q": WQ, "k": BK, "q": BQ}.get(ch)
            if bit is None or castling & bit:
                raise FenError(f"bad castling field {castle_s!r}")
            castling |= bit
    ep = -1
    if ep_s != "-":
        try:
            ep = parse_square(ep_s)
        except ValueError as exc:
            raise FenError(str(exc)) from None
        expected_rank = 5 if turn == WHITE else 2
        if ep >> 3 != expected_rank:
            raise FenError("en-passant square on wrong rank")
        pawn_sq = ep - 8 if turn == WHITE else ep + 8
        origin = ep + 8 if turn == WHITE else ep - 8
        mover = Color(turn ^ 1)
        if placement.get(pawn_sq) != Piece(PieceType.PAWN, mover) or ep in placement or origin in placement:
            raise FenError("en-passant square impossible for placement")
    try:
        halfmove = int(half_s)
        fullmove = int(full_s)
    except ValueError:
        raise FenError("clock fields must be integers") from None
    if halfmove < 0 or fullmove < 1:
        raise FenError("clock fields out of range")
    return _build(placement, turn, castling, ep, halfmove, fullmove)


def to_fen(pos: Position) -> str:
    return pos.fen()


def legal_moves(pos: Position) -> list[Move]:
    return pos.legal_moves()


def apply_move(pos: Position, move: Move) -> Position:
    """Apply a move after checking it is legal in `pos`."""
    if move not in pos.legal_moves():
        raise IllegalMoveError(f"illegal move {move.uci()} in {pos.fen()}")
    return pos.play(move)


def square_name(sq: int) -> str:
    return SQUARE_NAMES[sq]


__all__ = [
    "BLACK",
    "Color",
    "FILE_NAMES",
    "FenError",
    "IllegalMoveError",
    "Move",
    "MoveKind",
    "Piece",
    "PieceType",
    "Position",
    "STARTING_FEN",
    "WHITE",
    "apply_move",
    "legal_moves",
    "parse_fen",
    "square_name",
    "to_fen",
]
