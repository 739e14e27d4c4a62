"""Finite subgame graphs and their values under standard and ARR cycle payoffs.

Vertices are positions (placement, side to move, castling, en passant);
edges are legal moves.  A finite play ends at a terminal position or when a
move re-enters a vertex already on the current path.  The player making
that move closes the cycle; the payoff model says what a closure is worth.

Solving proceeds in two layers:

1. Retrograde attractors.  Vertices from which White can force a won
   terminal are WhiteWin, those from which Black can are BlackWin, each with
   its optimal distance.  These values never depend on the path.
2. Everything else is the cyclic core.  Under the standard model every core
   vertex is a Draw.  Under ARR the core is a path game (White loses by
   closing a cycle), so core values depend on the visited set.  The solver
   searches it exactly, one strongly connected component at a time, and
   reports the value of each vertex for a game that starts there.  If a
   component exceeds the search budget, its remaining vertices get a
   path-independent closure label and are flagged approximate.

Frontier vertices (outside the build limits) are Unknown.  Both layers are
run twice, once with Unknown scored as a Black win and once as a White win;
a vertex is decided only when the two runs agree.
"""

from __future__ import annotations

import csv
import io
import sys
from collections import deque
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Callable, Iterable, Optional, Union

from .core.game import RepetitionKey, repetition_key
from .core.notation import parse_uci
from .core.position import BLACK, WHITE, Move, Position, parse_fen


class Value(IntEnum):
    """Game values, ordered from White's point of view; UNKNOWN sorts apart."""

    BLACK_WIN = -1
    DRAW = 0
    WHITE_WIN = 1
    UNKNOWN = 2

    @property
    def label(self) -> str:
        return _VALUE_LABELS[self]

    @classmethod
    def from_label(cls, text: str) -> "Value":
        for v, name in _VALUE_LABELS.items():
            if name == text:
                return v
        raise ValueError(f"unknown value {text!r}")


_VALUE_LABELS = {
    Value.BLACK_WIN: "BlackWin",
    Value.DRAW: "Draw",
    Value.WHITE_WIN: "WhiteWin",
    Value.UNKNOWN: "Unknown",
}


class PayoffModel(Enum):
    STANDARD = "standard"
    ARR = "arr"

    def closure(self, closer: int) -> Value:
        """Payoff when `closer` makes the move that re-enters a visited vertex."""
        if self is PayoffModel.ARR and closer == WHITE:
            return Value.BLACK_WIN
        return Value.DRAW


@dataclass
class BuildLimits:
    max_vertices: int = 10_000
    max_pieces: int = 32
    # position key -> allowed UCI moves, or a callable from Position to UCI moves
    whitelist: Union[dict[str, list[str]], Callable[[Position], Iterable[str]], None] = None

    def __post_init__(self) -> None:
        if self.max_vertices < 1:
            raise ValueError("max_vertices must be >= 1")


@dataclass
class GameGraph:
    """Vertices 0..n-1 with a side to move, labelled edges, terminals and frontier."""

    sides: list[int]
    edges: list[list[tuple[object, int]]]
    terminal: dict[int, Value]
    unknown: set[int]
    root: int = 0
    names: list[str] = field(default_factory=list)
    positions: Optional[list[Position]] = None
    limits: Optional[BuildLimits] = None
    exhausted: bool = False

    def __post_init__(self) -> None:
        if not self.names:
            self.names = [str(i) for i in range(len(self.sides))]

    @property
    def size(self) -> int:
        return len(self.sides)

    @property
    def edge_count(self) -> int:
        return sum(len(e) for e in self.edges)

    def targets(self, v: int) -> list[int]:
        return [w for _, w in self.edges[v]]

    def validate(self) -> None:
        n = self.size
        for v in range(n):
            if v in self.terminal or v in self.unknown:
                if self.edges[v]:
                    raise ValueError(f"vertex {v} is terminal/unknown but has edges")
            elif not self.edges[v]:
                raise ValueError(f"non-terminal vertex {v} has no edges")
            for _, w in self.edges[v]:
                if not 0 <= w < n:
                    raise ValueError(f"edge {v}->{w} out of range")

    def structure(self) -> tuple:
        """Vertex and edge sets, for checking that the payoff model never changes topology."""
        return (
            tuple(self.sides),
            tuple(tuple((str(m), w) for m, w in e) for e in self.edges),
            tuple(sorted(self.terminal.items())),
            tuple(sorted(self.unknown)),
        )

    @classmethod
    def from_abstract(
        cls,
        sides: list[int],
        edges: dict[int, list[int]],
        terminal: Optional[dict[int, Value]] = None,
        unknown: Iterable[int] = (),
        root: int = 0,
        names: Optional[list[str]] = None,
    ) -> "GameGraph":
        n = len(sides)
        adj: list[list[tuple[object, int]]] = [[(f"{v}-{w}", w) for w in edges.get(v, [])] for v in range(n)]
        g = cls(list(sides), adj, dict(terminal or {}), set(unknown), root, list(names or []))
        g.validate()
        return g


def _natural_outcome(pos: Position, legal: list[Move]) -> Optional[Value]:
    if not legal:
        if pos.is_check():
            return Value.BLACK_WIN if pos.turn == WHITE else Value.WHITE_WIN
        return Value.DRAW
    if pos.is_insufficient_material():
        return Value.DRAW
    return None


def _canonical(pos: Position) -> Position:
    return parse_fen(" ".join(pos.fen().split()[:4]) + " 0 1")


def position_key_text(pos: Position) -> str:
    return " ".join(pos.fen().split()[:4])


def build_subgame(root: Position, limits: Optional[BuildLimits] = None) -> GameGraph:
    """Breadth-first closure of the move graph from `root` within `limits`.

    Vertices that cannot be expanded (vertex budget, piece limit, or no
    whitelisted move) stay in the graph as Unknown frontier.
    """
    limits = limits or BuildLimits()
    root = _canonical(root)
    index: dict[RepetitionKey, int] = {repetition_key(root): 0}
    positions = [root]
    sides = [root.turn]
    edges: list[list[tuple[object, int]]] = [[]]
    terminal: dict[int, Value] = {}
    unknown: set[int] = set()
    queue = deque([0])
    exhausted = False
    wl = limits.whitelist
    while queue:
        v = queue.popleft()
        pos = positions[v]
        legal = pos.legal_moves()
        outcome = _natural_outcome(pos, legal)
        if outcome is not None:
            terminal[v] = outcome
            continue
        if pos.piece_count() > limits.max_pieces:
            unknown.add(v)
            continue
        if wl is not None:
            allowed = set(wl(pos) if callable(wl) else wl.get(position_key_text(pos), ()))
            legal = [m for m in legal if m.uci() in allowed]
            if not legal:
                unknown.add(v)
                continue
        children = []
        new = []
        for m in legal:
            child = pos.play(m)
            key = repetition_key(child)
            w = index.get(key)
            if w is None:
                new.append((m, key, child))
            else:
                children.append((m, w))
        if len(positions) + len(new) > limits.max_vertices:
            unknown.add(v)
            exhausted = True
            continue
        for m, key, child in new:
            w = len(positions)
            index[key] = w
            positions.append(child)
            sides.append(child.turn)
            edges.append([])
            queue.append(w)
            children.append((m, w))
        children.sort(key=lambda mw: mw[0].uci())
        edges[v] = children
    names = [position_key_text(p) for p in positions]
    g = GameGraph(sides, edges, terminal, unknown, 0, names, positions, limits, exhausted)
    return g


# ------------------------------------------------------------------ solving


@dataclass
class ValueMap:
    model: PayoffModel
    values: list[Value]
    distance: list[Optional[int]]
    approximate: set[int] = field(default_factory=set)

    def __getitem__(self, v: int) -> Value:
        return self.values[v]

    def root_value(self, g: GameGraph) -> Value:
        return self.values[g.root]


def _attractor(g: GameGraph, player: int, targets: Iterable[int]) -> dict[int, int]:
    """Retrograde attractor of `targets` for `player`, with optimal distances.

    The attracting player minimises the distance, the opponent maximises it;
    first-in first-out order delivers both.
    """
    preds: list[list[int]] = [[] for _ in range(g.size)]
    for v in range(g.size):
        for _, w in g.edges[v]:
            preds[w].append(v)
    remaining = [len(e) for e in g.edges]
    dist = {v: 0 for v in targets}
    queue = deque(dist)
    while queue:
        w = queue.popleft()
        d = dist[w] + 1
        for u in preds[w]:
            if u in dist:
                continue
            if g.sides[u] != player:
                remaining[u] -= 1
                if remaining[u]:
                    continue
            dist[u] = d
            queue.append(u)
    return dist


class _CoreSearch:
    """Exact first-revisit values of the ARR cyclic core, per component."""

    def __init__(self, g: GameGraph, decided: dict[int, Value], budget: int, total_budget: int):
        self.g = g
        self.decided = decided
        self.budget = budget
        self.total_budget = total_budget
        self.nodes = 0
        self.total = 0
        sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * g.size + 1000))
        self.core = [v for v in range(g.size) if v not in decided]
        self.comp = _scc(g, set(self.core))
        self.fresh: dict[int, Value] = {}
        self.memo: dict[tuple[int, int], Value] = {}
        self.local: dict[int, int] = {}
        for c in set(self.comp.values()):
            members = sorted(v for v in self.core if self.comp[v] == c)
            for i, v in enumerate(members):
                self.local[v] = i

    def value(self, v: int) -> Value:
        """Value of a game starting at core vertex v."""
        got = self.fresh.get(v)
        if got is None:
            got = self._f(v, 1 << self.local[v])
            self.fresh[v] = got
        return got

    def _f(self, v: int, mask: int) -> Value:
        key = (v, mask)
        got = self.memo.get(key)
        if got is not None:
            return got
        self.nodes += 1
        self.total += 1
        if self.nodes > self.budget or self.total > self.total_budget:
            raise _BudgetExceeded
        g = self.g
        side = g.sides[v]
        comp = self.comp[v]
        results = []
        best = None
        for _, w in g.edges[v]:
            if w in self.decided:
                r = self.decided[w]
            elif self.comp[w] != comp:
                r = self.value(w)
            else:
                bit = 1 << self.local[w]
                if mask & bit:
                    r = Value.BLACK_WIN if side == WHITE else Value.DRAW
                else:
                    r = self._f(w, mask | bit)
            results.append(r)
            if side == WHITE and r == Value.DRAW:
                best = r
                break
            if side == BLACK and r == Value.BLACK_WIN:
                best = r
                break
        if best is None:
            best = max(results) if side == WHITE else min(results)
        self.memo[key] = best
        return best


class _BudgetExceeded(Exception):
    pass


def _scc(g: GameGraph, region: set[int]) -> dict[int, int]:
    """Tarjan's algorithm restricted to `region`, iterative."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comp: dict[int, int] = {}
    counter = 0
    ncomp = 0
    for s in sorted(region):
        if s in index:
            continue
        work = [(s, iter([w for _, w in g.edges[s] if w in region]))]
        index[s] = low[s] = counter
        counter += 1
        stack.append(s)
        on_stack.add(s)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter([x for _, x in g.edges[w] if x in region])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp


def _solve_closed(g: GameGraph, model: PayoffModel, unknown_as: Value, budget: int, total_budget: int):
    """Values with every Unknown frontier vertex replaced by `unknown_as`."""
    n = g.size
    term = dict(g.terminal)
    for u in g.unknown:
        term[u] = unknown_as
    ww = _attractor(g, WHITE, [v for v, t in term.items() if t == Value.WHITE_WIN])
    bw = _attractor(g, BLACK, [v for v, t in term.items() if t == Value.BLACK_WIN])
    values: list[Value] = [Value.DRAW] * n
    dist: list[Optional[int]] = [None] * n
    decided: dict[int, Value] = {}
    for v, d in ww.items():
        values[v], dist[v] = Value.WHITE_WIN, d
        decided[v] = Value.WHITE_WIN
    for v, d in bw.items():
        values[v], dist[v] = Value.BLACK_WIN, d
        decided[v] = Value.BLACK_WIN
    for v, t in term.items():
        if v not in decided:
            values[v], dist[v] = t, 0
            decided[v] = t
    approx: set[int] = set()
    if model is PayoffModel.STANDARD:
        return values, dist, approx
    # White forces a drawn terminal inside the core: path independent Draw.
    core = set(range(n)) - set(decided)
    drawn = [v for v, t in term.items() if t == Value.DRAW]
    da = _attractor_region(g, WHITE, drawn, core | set(drawn))
    for v in da:
        if v not in decided:
            values[v] = Value.DRAW
            dist[v] = None
            decided[v] = Value.DRAW
    search = _CoreSearch(g, decided, budget, total_budget)
    for v in sorted(search.core):
        search.nodes = 0
        try:
            if search.total > total_budget:
                raise _BudgetExceeded
            values[v] = search.value(v)
        except _BudgetExceeded:
            # closure label: White to move is assumed to find a fresh move,
            # Black to move is assumed to force White into a closure
            approx.add(v)
            values[v] = Value.DRAW if g.sides[v] == WHITE else Value.BLACK_WIN
            search.memo.clear()
    return values, dist, approx


def _attractor_region(g: GameGraph, player: int, targets: list[int], region: set[int]) -> set[int]:
    """Vertices of `region` from which `player` forces a visit to `targets` staying inside `region`."""
    attr = set(targets)
    remaining = {v: len(g.edges[v]) for v in region}
    preds: dict[int, list[int]] = {}
    for v in region:
        for _, w in g.edges[v]:
            preds.setdefault(w, []).append(v)
    queue = deque(targets)
    while queue:
        w = queue.popleft()
        for u in preds.get(w, []):
            if u in attr or u not in region or u in g.terminal or u in g.unknown:
                continue
            if g.sides[u] == player:
                attr.add(u)
                queue.append(u)
            else:
                remaining[u] -= 1
                if remaining[u] == 0:
                    attr.add(u)
                    queue.append(u)
    return attr


DEFAULT_SEARCH_BUDGET = 200_000
DEFAULT_TOTAL_BUDGET = 1_000_000


def solve_payoff(
    g: GameGraph,
    model: PayoffModel,
    budget: int = DEFAULT_SEARCH_BUDGET,
    total_budget: int = DEFAULT_TOTAL_BUDGET,
) -> ValueMap:
    """Per-vertex values under `model` for games that start at each vertex.

    `budget` caps the core search for one starting vertex, `total_budget`
    for the whole graph; vertices left over are flagged approximate.
    """
    if g.unknown:
        lo, dlo, alo = _solve_closed(g, model, Value.BLACK_WIN, budget, total_budget)
        hi, dhi, ahi = _solve_closed(g, model, Value.WHITE_WIN, budget, total_budget)
        values = []
        dist: list[Optional[int]] = []
        for v in range(g.size):
            if lo[v] == hi[v]:
                values.append(lo[v])
                dist.append(dlo[v] if dlo[v] == dhi[v] else None)
            else:
                values.append(Value.UNKNOWN)
                dist.append(None)
        return ValueMap(model, values, dist, alo | ahi)
    values, dist, approx = _solve_closed(g, model, Value.UNKNOWN, budget, total_budget)
    return ValueMap(model, values, dist, approx)


def bellman_residual(g: GameGraph, vm: ValueMap) -> list[int]:
    """Vertices whose value changes under one more backup sweep.

    The sweep covers every vertex under the standard model.  Under ARR it
    covers the vertices decided by attractors (those with a distance): core
    values belong to games starting at that vertex, so a core vertex need
    not agree with its successors' fresh-start values.
    """
    bad = []
    for v in range(g.size):
        if v in g.terminal or v in g.unknown or vm.values[v] == Value.UNKNOWN:
            continue
        if vm.model is PayoffModel.ARR and vm.distance[v] is None:
            continue
        succ = [vm.values[w] for w in g.targets(v)]
        if Value.UNKNOWN in succ:
            continue
        best = max(succ) if g.sides[v] == WHITE else min(succ)
        if best != vm.values[v]:
            bad.append(v)
    return bad


def solve_bounds(g: GameGraph, model: PayoffModel, budget: int = DEFAULT_SEARCH_BUDGET, total_budget: int = DEFAULT_TOTAL_BUDGET) -> tuple[ValueMap, ValueMap]:
    """Values with the frontier scored as a Black win, then as a White win."""
    out = []
    for fill in (Value.BLACK_WIN, Value.WHITE_WIN):
        values, dist, approx = _solve_closed(g, model, fill, budget, total_budget)
        out.append(ValueMap(model, values, dist, approx))
    return out[0], out[1]


# ------------------------------------------------------------ exact oracle


class OracleBudgetExceeded(Exception):
    pass


def history_exact_graph(g: GameGraph, model: PayoffModel, root: Optional[int] = None, budget: int = 2_000_000, repeats: int = 3) -> Value:
    """Game value with full move histories and `repeats`-fold repetition ending the game.

    Exhaustive depth-first search over (vertex, occurrence counts).  Unknown
    frontier vertices are bracketed the same way as in the solver.  Returns
    Value.UNKNOWN when the budget runs out.
    """
    root = g.root if root is None else root
    try:
        if g.unknown:
            lo = _history_search(g, model, root, Value.BLACK_WIN, budget, repeats)
            hi = _history_search(g, model, root, Value.WHITE_WIN, budget, repeats)
            return lo if lo == hi else Value.UNKNOWN
        return _history_search(g, model, root, Value.UNKNOWN, budget, repeats)
    except OracleBudgetExceeded:
        return Value.UNKNOWN


def history_exact_bounded(g: GameGraph, model: PayoffModel, root: Optional[int] = None, budget: int = 2_000_000, repeats: int = 3) -> Optional[Value]:
    """Like history_exact_graph but None when the budget runs out."""
    root = g.root if root is None else root
    try:
        if g.unknown:
            lo = _history_search(g, model, root, Value.BLACK_WIN, budget, repeats)
            hi = _history_search(g, model, root, Value.WHITE_WIN, budget, repeats)
            return lo if lo == hi else Value.UNKNOWN
        return _history_search(g, model, root, Value.UNKNOWN, budget, repeats)
    except OracleBudgetExceeded:
        return None


def _history_search(g: GameGraph, model: PayoffModel, root: int, unknown_as: Value, budget: int, repeats: int) -> Value:
    memo: dict[tuple[int, tuple], Value] = {}
    counter = [0]
    # leaves first, so an immediate win cuts the search off at once
    order = [sorted(g.targets(v), key=lambda w: (w not in g.terminal and w not in g.unknown)) for v in range(g.size)]
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 8 * g.size + 1000))

    def leaf(v: int) -> Optional[Value]:
        if v in g.terminal:
            return g.terminal[v]
        if v in g.unknown:
            return unknown_as
        return None

    def search(v: int, counts: dict[int, int]) -> Value:
        t = leaf(v)
        if t is not None:
            return t
        sig = (v, tuple(sorted(counts.items())))
        got = memo.get(sig)
        if got is not None:
            return got
        counter[0] += 1
        if counter[0] > budget:
            raise OracleBudgetExceeded
        side = g.sides[v]
        best: Optional[Value] = None
        for w in order[v]:
            c = counts.get(w, 0)
            if leaf(w) is None and c + 1 >= repeats:
                r = model.closure(side)
            else:
                counts[w] = c + 1
                r = search(w, counts)
                if c:
                    counts[w] = c
                else:
                    del counts[w]
            if best is None or (r > best if side == WHITE else r < best):
                best = r
            if (side == WHITE and best == Value.WHITE_WIN) or (side == BLACK and best == Value.BLACK_WIN):
                break
        assert best is not None
        memo[sig] = best
        return best

    return search(root, {root: 1})


def history_exact_value(
    root: Position,
    model: PayoffModel,
    limits: Optional[BuildLimits] = None,
    budget: int = 2_000_000,
) -> Value:
    """Exact threefold-repetition value of `root` inside its limited subgame."""
    g = build_subgame(root, limits)
    return history_exact_graph(g, model, 0, budget)


# ------------------------------------------------------------- comparison


@dataclass
class RuleComparison:
    standard: ValueMap
    arr: ValueMap
    changed: list[int]

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for v in self.changed:
            key = f"{self.standard.values[v].label}->{self.arr.values[v].label}"
            out[key] = out.get(key, 0) + 1
        return out

    def rows(self, g: GameGraph) -> list[dict]:
        return [
            {
                "vertex": v,
                "position": g.names[v],
                "side": "White" if g.sides[v] == WHITE else "Black",
                "standard": self.standard.values[v].label,
                "arr": self.arr.values[v].label,
                "changed": v in self._changed_set,
                "standard_distance": "" if self.standard.distance[v] is None else self.standard.distance[v],
                "arr_distance": "" if self.arr.distance[v] is None else self.arr.distance[v],
            }
            for v in range(g.size)
        ]

    @property
    def _changed_set(self) -> set[int]:
        return set(self.changed)


def compare_rules(g: GameGraph, budget: int = DEFAULT_SEARCH_BUDGET, total_budget: int = DEFAULT_TOTAL_BUDGET) -> RuleComparison:
    before = g.structure()
    std = solve_payoff(g, PayoffModel.STANDARD, budget, total_budget)
    arr = solve_payoff(g, PayoffModel.ARR, budget, total_budget)
    assert g.structure() == before
    changed = [
        v
        for v in range(g.size)
        if std.values[v] != arr.values[v] or std.distance[v] != arr.distance[v]
    ]
    return RuleComparison(std, arr, changed)


COMPARISON_COLUMNS = ("vertex", "position", "side", "standard", "arr", "changed", "standard_distance", "arr_distance")


# ------------------------------------------------------------- text format

_HEADER = "# arrchess graph v1"


def graph_to_text(g: GameGraph) -> str:
    """Line format: 'v id side status name', 'e from to label', 'root id'."""
    out = [_HEADER, f"root {g.root}"]
    for v in range(g.size):
        status = "-"
        if v in g.terminal:
            status = g.terminal[v].label
        elif v in g.unknown:
            status = "Unknown"
        side = "w" if g.sides[v] == WHITE else "b"
        out.append(f"v {v} {side} {status} {g.names[v]}")
    for v in range(g.size):
        for label, w in g.edges[v]:
            text = label.uci() if isinstance(label, Move) else str(label)
            out.append(f"e {v} {w} {text}")
    return "\n".join(out) + "\n"


def graph_from_text(text: str) -> GameGraph:
    sides: list[int] = []
    names: list[str] = []
    terminal: dict[int, Value] = {}
    unknown: set[int] = set()
    raw_edges: list[tuple[int, int, str]] = []
    root = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(maxsplit=4)
        try:
            if parts[0] == "root":
                root = int(parts[1])
            elif parts[0] == "v":
                vid = int(parts[1])
                if vid != len(sides):
                    raise ValueError("vertices must be listed in order")
                if parts[2] not in ("w", "b"):
                    raise ValueError(f"bad side {parts[2]!r}")
                sides.append(WHITE if parts[2] == "w" else BLACK)
                status = parts[3]
                if status == "Unknown":
                    unknown.add(vid)
                elif status != "-":
                    terminal[vid] = Value.from_label(status)
                names.append(parts[4] if len(parts) > 4 else str(vid))
            elif parts[0] == "e":
                raw_edges.append((int(parts[1]), int(parts[2]), parts[3] if len(parts) > 3 else f"{parts[1]}-{parts[2]}"))
            else:
                raise ValueError(f"unknown record {parts[0]!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    edges: list[list[tuple[object, int]]] = [[] for _ in sides]
    positions: Optional[list[Position]] = None
    try:
        positions = [parse_fen(name + " 0 1") for name in names]
    except ValueError:
        positions = None
    for v, w, label in raw_edges:
        if not 0 <= v < len(sides):
            raise ValueError(f"edge from unknown vertex {v}")
        mv: object = label
        if positions is not None:
            try:
                mv = parse_uci(positions[v], label)
            except ValueError:
                mv = label
        edges[v].append((mv, w))
    g = GameGraph(sides, edges, terminal, unknown, root, names, positions)
    g.validate()
    return g


def comparison_csv(g: GameGraph, cmp: RuleComparison) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COMPARISON_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in cmp.rows(g):
        writer.writerow(row)
    return buf.getvalue()
