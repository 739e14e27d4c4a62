import pytest

from arrchess.core import GameState, parse_fen, parse_san
from arrchess.core.position import Position
from arrchess.engine import (
    MATE_BASE,
    EngineClosedError,
    EngineConfig,
    EngineError,
    EngineSpawnError,
    EngineTimeout,
    ForcedRepetition,
    ProtocolError,
    SearchRequest,
    SearchResult,
    best_move,
    evaluate_static,
    filtered_best_move,
    new_game,
    non_repeating_moves,
    parse_info_score,
    start_engine,
)
from arrchess.stub_engine import position_key

# White king boxed in on a1/b1: its only move alternates between the two squares
BOXED = "2r4k/8/8/8/8/p2n4/P7/K7 b - - 0 1"


def play_sans(state: GameState, sans: str) -> GameState:
    for s in sans.split():
        state = state.push(parse_san(state.position, s))
    return state


def test_handshake_and_unsupported_option(stub):
    cfg = stub(name="tester").with_changes(options={"Contempt": 10})
    with start_engine(cfg) as h:
        assert h.name == "tester"
        assert {"hash", "threads"} <= h.advertised
        assert any("Contempt" in w for w in h.warnings)
        new_game(h)
        assert h.alive
    assert not h.alive


def test_best_move_is_legal_and_deterministic(stub):
    cfg = stub()
    state = GameState.initial()
    with start_engine(cfg) as a, start_engine(cfg) as b:
        ra, rb = best_move(a, state), best_move(b, state)
    assert ra.move == rb.move
    assert ra.move in state.position.legal_moves()
    assert ra.score_cp == 0 and ra.depth == 2


def test_searchmoves_restriction_and_log(stub, tmp_path):
    log = tmp_path / "cmds.txt"
    cfg = stub(log=str(log))
    state = GameState.initial()
    allowed = [parse_san(state.position, "a3"), parse_san(state.position, "h3")]
    with start_engine(cfg) as h:
        r = best_move(h, SearchRequest(state, depth=3, restricted=allowed))
        assert r.move in allowed
        r2 = filtered_best_move(h, state)
    lines = log.read_text().splitlines()
    assert "go depth 3 searchmoves a2a3 h2h3" in lines
    # nothing repeats at the start, so the filter sends an unrestricted search
    assert lines.count("go depth 2") == 1
    assert r2.move in state.position.legal_moves()


def test_filter_excludes_third_occurrence():
    state = play_sans(GameState.initial(), "e4 Nf6 Nf3 Ng8 Ng1 Nf6 Nf3 Ng8")
    allowed, legal = non_repeating_moves(state)
    # Ng1 would bring back the position after 1.e4 for the third time
    assert [m.uci() for m in legal if m not in allowed] == ["f3g1"]


def test_forced_repetition_detected(stub):
    state = play_sans(GameState(parse_fen(BOXED)), "Kg8 Kb1 Kh8 Ka1 Kg8 Kb1 Kh8")
    assert state.position.legal_moves() and len(state.position.legal_moves()) == 1
    with start_engine(stub()) as h:
        res = filtered_best_move(h, state)
    assert isinstance(res, ForcedRepetition)
    assert [m.uci() for m in res.moves] == ["b1a1"]


def test_filter_is_white_only(stub):
    state = play_sans(GameState.initial(), "e4")
    with start_engine(stub()) as h:
        with pytest.raises(ValueError):
            filtered_best_move(h, state)


def test_hung_engine_times_out(stub):
    cfg = stub(silent_handshake=True).with_changes(handshake_timeout_ms=300)
    with pytest.raises(EngineTimeout):
        start_engine(cfg)


def test_engine_dying_mid_search(stub):
    with start_engine(stub(die_on_go=True)) as h:
        with pytest.raises(EngineError):
            best_move(h, GameState.initial())


def test_illegal_bestmove_is_protocol_error(stub):
    start = position_key(Position.initial())
    with start_engine(stub(bestmove={start: "bestmove e2e5"})) as h:
        with pytest.raises(ProtocolError):
            best_move(h, GameState.initial())
    with start_engine(stub(bestmove={start: "bestmove"})) as h:
        with pytest.raises(ProtocolError):
            best_move(h, GameState.initial())


def test_scripted_moves_and_scores(stub):
    start = position_key(Position.initial())
    cfg = stub(moves={start: ["g1f3", "e2e4"]}, scores={start: "mate 3"})
    with start_engine(cfg) as h:
        r = best_move(h, GameState.initial())
        assert r.move.uci() == "g1f3"
        assert r.mate == 3 and r.white_score(0) == MATE_BASE - 3
        assert evaluate_static(h, Position.initial()) == MATE_BASE - 3


def test_spawn_failure():
    with pytest.raises(EngineSpawnError):
        start_engine(EngineConfig("/nonexistent/engine"))


def test_closed_handle(stub):
    h = start_engine(stub())
    h.close()
    h.close()
    with pytest.raises(EngineClosedError):
        h.send("isready")


def test_game_over_and_bad_requests(stub):
    mated = GameState(parse_fen("k7/1Q6/1K6/8/8/8/8/8 b - - 0 1"))
    with start_engine(stub()) as h:
        with pytest.raises(ValueError):
            best_move(h, mated)
    state = GameState.initial()
    with pytest.raises(ValueError):
        SearchRequest(state, restricted=[])
    with pytest.raises(ValueError):
        SearchRequest(state, depth=0)
    black_move = parse_san(play_sans(state, "e4").position, "e5")
    with pytest.raises(ValueError):
        SearchRequest(state, restricted=[black_move])


@pytest.mark.parametrize(
    "line,expected",
    [
        ("info depth 7 seldepth 9 score cp -35 nodes 100 pv e2e4", (-35, None, 7)),
        ("info depth 12 score mate -2 pv a1a2", (None, -2, 12)),
        ("info depth 3 score cp 20 lowerbound", (20, None, 3)),
        ("info string hello score cp 5", (None, None, None)),
        ("info nodes 5", (None, None, None)),
    ],
)
def test_parse_info_score(line, expected):
    assert parse_info_score(line) == expected


def test_white_score_conventions():
    m = parse_san(Position.initial(), "e4")
    assert SearchResult(m, 30, None, 1, "").white_score(1) == -30
    assert SearchResult(m, None, -4, 1, "").white_score(0) == -(MATE_BASE - 4)
    assert SearchResult(m, None, 0, 1, "").white_score(0) == -MATE_BASE
    assert SearchResult(m, None, None, 1, "").white_score(0) is None


def test_config_validation_and_options():
    with pytest.raises(ValueError):
        EngineConfig("x", depth=0)
    with pytest.raises(ValueError):
        EngineConfig("x", search_timeout_ms=0)
    cfg = EngineConfig("x", options={"Hash": 64})
    assert cfg.effective_options() == {"Threads": 1, "Hash": 64}
    assert EngineConfig("x", deterministic=False).effective_options() == {}
    assert cfg.argv() == ["x"]
