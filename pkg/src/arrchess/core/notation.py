"""SAN and UCI move notation."""

from __future__ import annotations

import re
from typing import Optional

from .bitboard import KING, KNIGHT, PAWN_ATTACKS, SQUARE_NAMES, parse_square
from .position import (
    _MOVES,
    _PROMOS,
    BISHOP,
    CAPTURE,
    CASTLE,
    EN_PASSANT,
    KING_T,
    KNIGHT_T,
    NORMAL,
    PAWN,
    PIECE_SYMBOLS,
    QUEEN,
    ROOK,
    WHITE,
    IllegalMoveError,
    Move,
    Position,
    _bishop_att,
    _rook_att,
)


class NotationError(IllegalMoveError):
    """A move token that cannot be parsed or does not denote a legal move."""


_SAN_RE = re.compile(r"^([NBRQK])?([a-h])?([1-8])?(x)?([a-h][1-8])(?:=?([NBRQnbrq]))?$")
_PIECE_LETTERS = {"N": KNIGHT_T, "B": BISHOP, "R": ROOK, "Q": QUEEN, "K": KING_T}
_SUFFIX = "+#!?"

# SAN text -> parsed tuple. Tokens repeat heavily across a corpus.
_san_cache: dict[str, tuple] = {}


def _parse_san_text(text: str) -> tuple:
    parsed = _san_cache.get(text)
    if parsed is not None:
        return parsed
    core = text.rstrip(_SUFFIX)
    if core in ("O-O", "0-0"):
        parsed = ("castle", 1)
    elif core in ("O-O-O", "0-0-0"):
        parsed = ("castle", -1)
    else:
        m = _SAN_RE.match(core)
        if not m:
            raise NotationError(f"unparseable SAN token {text!r}")
        piece_s, file_s, rank_s, _cap, to_s, promo_s = m.groups()
        piece = _PIECE_LETTERS[piece_s] if piece_s else PAWN
        from_file = "abcdefgh".index(file_s) if file_s else -1
        from_rank = int(rank_s) - 1 if rank_s else -1
        promo = _PIECE_LETTERS[promo_s.upper()] if promo_s else 0
        if promo == KING_T or (promo and piece != PAWN):
            raise NotationError(f"bad promotion in {text!r}")
        parsed = ("move", piece, from_file, from_rank, parse_square(to_s), promo)
    if len(_san_cache) < 200_000:
        _san_cache[text] = parsed
    return parsed


def _is_safe(pos: Position, frm: int, to: int, ksq: int) -> bool:
    """True if moving a non-king piece frm->to (normal or capture) keeps the king safe."""
    us = pos.turn
    bb = pos._bb
    tbit = 1 << to
    enemy = pos._occ[us ^ 1] & ~tbit
    occ = ((pos._occ[0] | pos._occ[1]) & ~(1 << frm)) | tbit
    queens = bb[QUEEN]
    return not (
        (
            (KNIGHT[ksq] & bb[KNIGHT_T])
            | (PAWN_ATTACKS[us][ksq] & bb[PAWN])
            | (_rook_att(ksq, occ) & (bb[ROOK] | queens))
            | (_bishop_att(ksq, occ) & (bb[BISHOP] | queens))
        )
        & enemy
    )


def parse_san(pos: Position, text: str) -> Move:
    """Resolve a SAN token to the unique legal move it denotes."""
    parsed = _parse_san_text(text)
    us = pos.turn
    them = us ^ 1
    if parsed[0] == "castle":
        k_from = 4 if us == WHITE else 60
        target = k_from + 2 * parsed[1]
        out: list[Move] = []
        if pos.king_square(us) == k_from and not pos.attackers(them, k_from):
            pos._castling_moves(out, us, k_from, pos._occ[0] | pos._occ[1])
        for mv in out:
            if mv.to_square == target:
                return mv
        raise NotationError(f"illegal castling {text!r} in {pos.fen()}")

    _, piece, from_file, from_rank, to, promo = parsed
    bb = pos._bb
    ours = pos._occ[us]
    theirs = pos._occ[them]
    occ = ours | theirs
    tbit = 1 << to
    if ours & tbit:
        raise NotationError(f"{text!r}: destination occupied by own piece")
    ksq = (bb[KING_T] & ours).bit_length() - 1

    if piece == KING_T:
        if not KING[to] >> ksq & 1 or pos.attackers(them, to, occ ^ (1 << ksq)):
            raise NotationError(f"illegal king move {text!r} in {pos.fen()}")
        kind = CAPTURE if theirs & tbit else NORMAL
        return _MOVES[kind][ksq * 64 + to]

    if piece == PAWN:
        last_rank = (to >> 3) == (7 if us == WHITE else 0)
        if last_rank != bool(promo):
            raise NotationError(f"{text!r}: promotion piece mismatch")
        candidates = []
        if from_file < 0 or from_file == (to & 7):
            # pushes
            if not occ & tbit:
                step = 8 if us == WHITE else -8
                single = to - step
                pawns = bb[PAWN] & ours
                if 0 <= single < 64 and pawns >> single & 1:
                    candidates.append((single, NORMAL))
                elif (to >> 3) == (3 if us == WHITE else 4) and not occ >> single & 1:
                    double = single - step
                    if pawns >> double & 1:
                        candidates.append((double, NORMAL))
        if from_file >= 0 and from_file != (to & 7):
            origins = PAWN_ATTACKS[them][to] & bb[PAWN] & ours
            for frm in _squares(origins):
                if frm & 7 == from_file:
                    if theirs & tbit:
                        candidates.append((frm, CAPTURE))
                    elif to == pos.ep:
                        candidates.append((frm, EN_PASSANT))
        legal = []
        for frm, kind in candidates:
            if from_rank >= 0 and frm >> 3 != from_rank:
                continue
            if kind == EN_PASSANT:
                if frm in pos._ep_capturers(us, to):
                    legal.append(_MOVES[EN_PASSANT][frm * 64 + to])
            elif _is_safe(pos, frm, to, ksq):
                if promo:
                    legal.append(_PROMOS[frm, to, promo])
                else:
                    legal.append(_MOVES[kind][frm * 64 + to])
        if len(legal) != 1:
            raise NotationError(f"{'ambiguous' if legal else 'illegal'} pawn move {text!r} in {pos.fen()}")
        return legal[0]

    if piece == KNIGHT_T:
        origins = KNIGHT[to] & bb[KNIGHT_T] & ours
    elif piece == BISHOP:
        origins = _bishop_att(to, occ) & bb[BISHOP] & ours
    elif piece == ROOK:
        origins = _rook_att(to, occ) & bb[ROOK] & ours
    else:
        origins = (_rook_att(to, occ) | _bishop_att(to, occ)) & bb[QUEEN] & ours
    kind = CAPTURE if theirs & tbit else NORMAL
    found = None
    for frm in _squares(origins):
        if from_file >= 0 and frm & 7 != from_file:
            continue
        if from_rank >= 0 and frm >> 3 != from_rank:
            continue
        if _is_safe(pos, frm, to, ksq):
            if found is not None:
                raise NotationError(f"ambiguous move {text!r} in {pos.fen()}")
            found = frm
    if found is None:
        raise NotationError(f"illegal move {text!r} in {pos.fen()}")
    return _MOVES[kind][found * 64 + to]


def _squares(bb: int):
    while bb:
        low = bb & -bb
        bb ^= low
        yield low.bit_length() - 1


def san(pos: Position, move: Move, legal: Optional[list[Move]] = None) -> str:
    """Standard algebraic notation for a legal move, with check suffix."""
    if legal is None:
        legal = pos.legal_moves()
    if move not in legal:
        raise IllegalMoveError(f"illegal move {move.uci()} in {pos.fen()}")
    code = pos._board[move.from_square]
    ptype = code & 7
    if move.kind == CASTLE:
        text = "O-O" if move.to_square > move.from_square else "O-O-O"
    else:
        capture = move.kind in (CAPTURE, EN_PASSANT) or bool(pos._board[move.to_square])
        to_name = SQUARE_NAMES[move.to_square]
        if ptype == PAWN:
            text = ("abcdefgh"[move.from_square & 7] + "x" if capture else "") + to_name
            if move.promotion:
                text += "=" + PIECE_SYMBOLS[move.promotion].upper()
        else:
            rivals = [
                m.from_square
                for m in legal
                if m.to_square == move.to_square
                and m.from_square != move.from_square
                and pos._board[m.from_square] & 7 == ptype
            ]
            dis = ""
            if rivals:
                same_file = any(r & 7 == move.from_square & 7 for r in rivals)
                same_rank = any(r >> 3 == move.from_square >> 3 for r in rivals)
                if not same_file:
                    dis = "abcdefgh"[move.from_square & 7]
                elif not same_rank:
                    dis = "12345678"[move.from_square >> 3]
                else:
                    dis = SQUARE_NAMES[move.from_square]
            text = PIECE_SYMBOLS[ptype].upper() + dis + ("x" if capture else "") + to_name
    after = pos.play(move)
    if after.is_check():
        text += "#" if not after.legal_moves() else "+"
    return text


def parse_uci(pos: Position, text: str) -> Move:
    """Resolve long-algebraic text (e2e4, e7e8q) to the legal move it denotes."""
    text = text.strip()
    if len(text) not in (4, 5):
        raise NotationError(f"bad UCI move {text!r}")
    try:
        frm = parse_square(text[:2])
        to = parse_square(text[2:4])
    except ValueError:
        raise NotationError(f"bad UCI move {text!r}") from None
    promo = PIECE_SYMBOLS.find(text[4]) if len(text) == 5 else 0
    if promo < 0:
        raise NotationError(f"bad promotion in {text!r}")
    for mv in pos.legal_moves():
        if mv.from_square == frm and mv.to_square == to and int(mv.promotion or 0) == promo:
            return mv
    raise NotationError(f"illegal move {text!r} in {pos.fen()}")
