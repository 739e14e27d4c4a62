import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arrchess.core import BLACK, WHITE, parse_fen
from arrchess.solver import (
    BuildLimits,
    GameGraph,
    PayoffModel,
    Value,
    bellman_residual,
    build_subgame,
    compare_rules,
    comparison_csv,
    graph_from_text,
    graph_to_text,
    history_exact_graph,
    history_exact_value,
    position_key_text,
    solve_bounds,
    solve_payoff,
)

from oracles.cycle_games import first_revisit, k_fold, random_graph

STD, ARR = PayoffModel.STANDARD, PayoffModel.ARR
MATE_IN_ONE = "k7/7Q/1K6/8/8/8/8/8 w - - 0 1"


def abstract(owner, terminal, edges, root=0):
    sides = [WHITE if o == 0 else BLACK for o in owner]
    return GameGraph.from_abstract(
        sides,
        {v: e for v, e in edges.items() if v not in terminal},
        {v: Value(t) for v, t in terminal.items()},
        root=root,
    )


def loop_graph(exit_value: Value) -> GameGraph:
    # White vertex A: one move straight back to A, one to a terminal
    return GameGraph.from_abstract([WHITE, BLACK], {0: [0, 1]}, {1: exit_value})


def test_cycle_against_losing_exit():
    g = loop_graph(Value.BLACK_WIN)
    assert solve_payoff(g, STD)[0] == Value.DRAW
    assert solve_payoff(g, ARR)[0] == Value.BLACK_WIN


def test_winning_exit_dominates():
    g = loop_graph(Value.WHITE_WIN)
    for m in PayoffModel:
        vm = solve_payoff(g, m)
        assert vm[0] == Value.WHITE_WIN
        assert vm.distance[0] == 1


@pytest.mark.parametrize("exit_value", [Value.BLACK_WIN, Value.WHITE_WIN, Value.DRAW])
def test_oracle_agrees_on_loop_graphs(exit_value):
    g = loop_graph(exit_value)
    for m in PayoffModel:
        assert history_exact_graph(g, m) == solve_payoff(g, m)[0]


def test_two_cycle_depends_on_start():
    # A (White) -> B (Black) -> A with nothing else: whoever re-enters first closes
    g = GameGraph.from_abstract([WHITE, BLACK], {0: [1], 1: [0]})
    vm = solve_payoff(g, ARR)
    assert vm[0] == Value.DRAW  # Black closes
    assert vm[1] == Value.BLACK_WIN  # White closes
    assert solve_payoff(g, STD).values == [Value.DRAW, Value.DRAW]


def test_compare_rules_counts():
    g = loop_graph(Value.BLACK_WIN)
    cmp = compare_rules(g)
    assert cmp.changed == [0]
    assert cmp.counts() == {"Draw->BlackWin": 1}
    acyclic = GameGraph.from_abstract(
        [WHITE, BLACK, WHITE], {0: [1, 2], 1: [2]}, {2: Value.DRAW}
    )
    assert compare_rules(acyclic).changed == []
    text = comparison_csv(g, cmp)
    assert text.splitlines()[0].startswith("vertex,position,side,standard,arr,changed")
    assert "\r" not in text


def test_unknown_frontier_brackets():
    g = GameGraph.from_abstract([WHITE, BLACK, BLACK], {0: [1, 2]}, {2: Value.DRAW}, unknown=[1])
    assert solve_payoff(g, STD)[0] == Value.UNKNOWN
    assert history_exact_graph(g, STD) == Value.UNKNOWN
    g = GameGraph.from_abstract([WHITE, BLACK, BLACK], {0: [1, 2]}, {2: Value.WHITE_WIN}, unknown=[1])
    assert solve_payoff(g, ARR)[0] == Value.WHITE_WIN


def test_budget_fallback_is_flagged():
    rng = random.Random(5)
    n = 40
    edges = {v: rng.sample([u for u in range(n) if u % 2 != v % 2], 4) for v in range(n)}
    g = GameGraph.from_abstract([v % 2 for v in range(n)], edges)
    vm = solve_payoff(g, ARR, budget=5, total_budget=50)
    assert vm.approximate
    assert solve_payoff(g, STD, budget=5).approximate == set()


def test_invalid_abstract_graph():
    with pytest.raises(ValueError):
        GameGraph.from_abstract([WHITE, BLACK], {0: []})
    with pytest.raises(ValueError):
        GameGraph.from_abstract([WHITE], {0: [3]})


def _check_against_brute_force(seed):
    rng = random.Random(seed)
    alternating = seed % 2 == 0
    raw = random_graph(rng, rng.randint(2, 8), alternating)
    g = abstract(*raw)
    for m, arr in ((STD, False), (ARR, True)):
        vm = solve_payoff(g, m)
        assert not vm.approximate
        for r in range(g.size):
            assert vm[r] == Value(first_revisit(raw, r, arr)), (seed, m, r)
            if alternating:
                assert history_exact_graph(g, m, r) == Value(k_fold(raw, r, arr)), (seed, m, r)


@pytest.mark.parametrize("chunk", range(4))
def test_first_revisit_matches_brute_force(chunk):
    for seed in range(chunk * 300, (chunk + 1) * 300):
        _check_against_brute_force(seed)


def test_history_oracle_twofold_equals_first_revisit():
    for seed in range(200):
        rng = random.Random(seed)
        raw = random_graph(rng, rng.randint(2, 8), alternating=bool(seed % 2))
        g = abstract(*raw)
        for m, arr in ((STD, False), (ARR, True)):
            for r in range(g.size):
                assert history_exact_graph(g, m, r, repeats=2) == Value(first_revisit(raw, r, arr))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 12), st.booleans())
def test_monotone_and_model_independent_topology(seed, n, alternating):
    g = abstract(*random_graph(random.Random(seed), n, alternating))
    before = g.structure()
    std = solve_payoff(g, STD)
    arr = solve_payoff(g, ARR)
    assert g.structure() == before
    for v in range(g.size):
        assert arr[v] <= std[v]
    assert bellman_residual(g, std) == []
    assert bellman_residual(g, arr) == []


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 10))
def test_text_round_trip(seed, n):
    g = abstract(*random_graph(random.Random(seed), n))
    back = graph_from_text(graph_to_text(g))
    assert back.structure() == g.structure()
    assert back.root == g.root


def test_text_errors():
    with pytest.raises(ValueError, match="line 2"):
        graph_from_text("root 0\nv 0 x - a\n")
    with pytest.raises(ValueError):
        graph_from_text("v 0 w - a\n")  # non-terminal without edges


# ---------------------------------------------------------------- chess


def test_mate_in_one():
    g = build_subgame(parse_fen(MATE_IN_ONE), BuildLimits(max_vertices=2000))
    for m in PayoffModel:
        vm = solve_payoff(g, m)
        assert vm[0] == Value.WHITE_WIN
        assert vm.distance[0] == 1
        assert history_exact_graph(g, m, budget=200_000) == Value.WHITE_WIN


def test_tiny_budget_leaves_frontier():
    g = build_subgame(parse_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"), BuildLimits(max_vertices=5))
    assert g.exhausted
    assert 0 in g.unknown and g.size == 1
    assert solve_payoff(g, ARR)[0] == Value.UNKNOWN
    g = build_subgame(parse_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"), BuildLimits(max_vertices=30))
    assert g.exhausted and g.size == 21 and len(g.unknown) == 20


def test_whitelist_gives_exactly_those_edges():
    root = parse_fen(MATE_IN_ONE)
    g = build_subgame(root, BuildLimits(whitelist={position_key_text(root): ["h7b7"]}))
    assert g.size == 2
    assert [m.uci() for m, _ in g.edges[0]] == ["h7b7"]
    assert g.terminal == {1: Value.WHITE_WIN}
    assert not g.exhausted


def test_root_already_terminal():
    mated = parse_fen("k7/1Q6/1K6/8/8/8/8/8 b - - 0 1")
    stalemate = parse_fen("k7/8/1QK5/8/8/8/8/8 b - - 0 1")
    bare = parse_fen("k7/8/1K6/8/8/8/8/8 w - - 0 1")
    assert history_exact_value(mated, ARR) == Value.WHITE_WIN
    assert history_exact_value(stalemate, ARR) == Value.DRAW
    assert history_exact_value(bare, STD) == Value.DRAW


def test_piece_limit_marks_frontier():
    g = build_subgame(parse_fen(MATE_IN_ONE), BuildLimits(max_pieces=2))
    assert g.unknown == {0}


def test_closed_graph_survives_re_expansion():
    # two rooks shuttling between two squares each: a closed 4-cycle
    shuffles = {"a1b1", "b1a1", "g8f8", "f8g8"}

    def wl(pos):
        return [m.uci() for m in pos.legal_moves() if m.uci() in shuffles]

    g = build_subgame(parse_fen("6rk/8/8/8/8/8/8/R6K w - - 0 1"), BuildLimits(max_vertices=5000, whitelist=wl))
    assert g.size == 4
    assert not g.exhausted and not g.unknown and not g.terminal
    for v, pos in enumerate(g.positions):
        assert sorted(m.uci() for m, _ in g.edges[v]) == sorted(wl(pos))
        for m, w in g.edges[v]:
            assert position_key_text(pos.play(m)) == g.names[w]
    cmp = compare_rules(g)
    # starting with Black to move, White is the one who re-enters the start
    assert sorted(cmp.changed) == [v for v in range(4) if g.sides[v] == BLACK]
    for v in cmp.changed:
        assert (cmp.standard[v], cmp.arr[v]) == (Value.DRAW, Value.BLACK_WIN)
    for m in PayoffModel:
        vm = solve_payoff(g, m)
        for v in range(4):
            assert history_exact_graph(g, m, v) == vm[v]


def test_kqk_needs_more_than_ten_thousand_vertices():
    g = build_subgame(parse_fen("8/8/8/8/8/2k5/8/KQ6 w - - 0 1"), BuildLimits(max_vertices=10_000))
    assert g.exhausted and g.unknown


def test_solve_bounds_order():
    g = build_subgame(parse_fen("8/8/8/8/8/2k5/8/KQ6 w - - 0 1"), BuildLimits(max_vertices=500))
    for m in PayoffModel:
        lo, hi = solve_bounds(g, m)
        vm = solve_payoff(g, m)
        for v in range(g.size):
            assert lo[v] <= hi[v]
            if lo[v] == hi[v]:
                assert vm[v] == lo[v]
            else:
                assert vm[v] == Value.UNKNOWN
