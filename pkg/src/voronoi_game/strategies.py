"""Family-aware strategies and the named strategy registry."""

from __future__ import annotations

from typing import Any, Callable, Sequence

import numpy as np

from .families import copy_graph
from .graph import Graph
from .strategy import Strategy, StrategyError, greedy_move, lowest_free
from .trees import CentralStrategy, LegDefenseStrategy, TwoRoundStrategy
from .voronoi import Player, Position, dominance_region

Point = tuple[int, ...]


def project_pi(x: Sequence[int], i: int, L: int | None = None) -> Point:
    """Step from ``x`` away from corner ``i``: ``x_i - (d-1)``, other coordinates ``+1``.

    With ``L`` given (cube variant) the other coordinates are clamped at ``L``
    and the result must stay in the cut-corner cube. Raises ``ValueError``
    when the step leaves the vertex set.
    """
    d = len(x)
    if not 0 <= i < d:
        raise ValueError(f"coordinate index {i} out of range for d={d}")
    up = (lambda v: v + 1) if L is None else (lambda v: min(v + 1, L))
    y = tuple(x[j] - (d - 1) if j == i else up(x[j]) for j in range(d))
    if y[i] < 0:
        raise ValueError(f"pi_{i}({tuple(x)}) leaves the lattice: coordinate {y[i]} < 0")
    if L is not None and sum(y) < L:
        raise ValueError(f"pi_{i}({tuple(x)}) = {y} falls into the cut-off corner")
    return y


def largest_coordinate(x: Sequence[int]) -> int:
    """Index of the largest coordinate, lowest index on ties."""
    return max(range(len(x)), key=lambda j: (x[j], -j))


class GreedyStrategy(Strategy):
    name = "greedy"

    def __init__(self, graph: Graph, holder: Player | str = Player.A) -> None:
        super().__init__(graph, holder=Player.parse(holder).value)
        self.holder = Player.parse(holder)

    def move(self, pos: Position) -> int:
        return greedy_move(self.graph, pos, self.holder)


class SimplexStrategy(Strategy):
    """B answers A's lattice move x by the first free point of pi_i(x), pi_i(pi_i(x)), ...

    ``i`` is the largest coordinate of x. A move on a leaf counts as a move on
    the lattice vertex it hangs from. Points held by either player are skipped.
    """

    name = "simplex-b"
    holder = Player.B

    def __init__(self, graph: Graph) -> None:
        super().__init__(graph)
        meta = graph.meta
        if meta is None or meta.family != "simplex":
            raise StrategyError("simplex strategy needs a graph built by gen_simplex")
        self.d = meta.params["d"]
        self.total = self.d * self.d * meta.params["t0"]
        self.index = {p: v for v, p in meta.coords.items()}
        pts = np.zeros((graph.n, self.d), dtype=np.int64)
        for v, p in meta.coords.items():
            pts[v] = p
        for leaf, host in meta.anchor.items():
            pts[leaf] = meta.coords[host]
        self.points = pts
        radix = self.total + 1
        self.weights = radix ** np.arange(self.d, dtype=np.int64)
        self.table: np.ndarray | None = None
        if radix**self.d <= 20_000_000:
            self.table = np.full(radix**self.d, -1, dtype=np.int64)
            for p, v in self.index.items():
                self.table[int(np.dot(p, self.weights))] = v

    def interpret(self, v: int) -> Point:
        return tuple(int(c) for c in self.points[v])

    def move(self, pos: Position) -> int:
        x = self.interpret(pos.a[-1])
        i = largest_coordinate(x)
        taken = pos.claimed
        y = x
        while True:
            try:
                y = project_pi(y, i)
            except ValueError as exc:
                raise StrategyError(f"projection chain left the simplex after moves {list(pos.moves())}") from exc
            v = self.index[y]
            if v not in taken:
                return v

    def _lookup(self, pts: np.ndarray) -> np.ndarray:
        if self.table is not None:
            return self.table[pts @ self.weights]
        return np.array([self.index[tuple(int(c) for c in p)] for p in pts], dtype=np.int64)

    def move_batch(self, pos: Position, opponent_moves: np.ndarray) -> np.ndarray:
        opp = np.asarray(opponent_moves, dtype=np.int64)
        x = self.points[opp].copy()
        i = np.argmax(x, axis=1)
        step = np.ones_like(x)
        step[np.arange(len(x)), i] = 1 - self.d
        taken = np.zeros(self.graph.n, dtype=bool)
        taken[list(pos.claimed)] = True
        out = np.full(len(x), -1, dtype=np.int64)
        todo = np.arange(len(x))
        y = x
        while len(todo):
            y = y + step[todo]
            if (y < 0).any():
                k = int(todo[np.flatnonzero((y < 0).any(axis=1))[0]])
                raise StrategyError(
                    f"projection chain left the simplex after moves {list(pos.moves()) + [int(opp[k])]}"
                )
            ids = self._lookup(y)
            free = ~taken[ids] & (ids != opp[todo])
            out[todo[free]] = ids[free]
            todo = todo[~free]
            y = y[~free]
        return out


class GridCyclesStrategy(Strategy):
    """B on grid-connected cycles: play the cube strategy on interpreted moves.

    A ring node is read as its grid point, a connection-path node as the
    endpoint with the smaller changing coordinate, a tail node as its corner.
    A repeat of an already occupied grid point is a wasted move, answered by
    the lowest free vertex. The reply lands on the lowest free node of the
    ring of the abstract answer.
    """

    name = "gcc-b"
    holder = Player.B

    def __init__(self, graph: Graph) -> None:
        super().__init__(graph)
        meta = graph.meta
        if meta is None or meta.family != "grid_connected_cycles":
            raise StrategyError("grid-cycles strategy needs a graph built by gen_grid_connected_cycles")
        self.d = meta.params["d"]
        self.L = meta.params["L"]
        self.meta = meta

    def interpret(self, v: int) -> Point:
        meta = self.meta
        if v in meta.coords:
            return meta.coords[v]
        if v in meta.connections:
            return meta.connections[v][0]
        return meta.coords[meta.anchor[v]]

    def abstract_reply(self, x: Point, occupied: set[Point]) -> Point:
        i = largest_coordinate(x)
        y = x
        while True:
            try:
                y = project_pi(y, i, self.L)
            except ValueError as exc:
                raise StrategyError(f"cube projection chain from {x} left the vertex set") from exc
            if y not in occupied:
                return y

    def abstract_line(self, pos: Position) -> list[Point | None]:
        """The cube strategy's answer to each of A's moves (``None`` = wasted)."""
        occupied: set[Point] = set()
        replies: list[Point | None] = []
        for v in pos.a:
            x = self.interpret(v)
            if x in occupied:
                replies.append(None)
                continue
            occupied.add(x)
            y = self.abstract_reply(x, occupied)
            occupied.add(y)
            replies.append(y)
        return replies

    def move(self, pos: Position) -> int:
        y = self.abstract_line(pos)[-1]
        if y is not None:
            taken = pos.claimed
            for v in self.meta.rings[y]:
                if v not in taken:
                    return v
        return lowest_free(self.graph, pos)


class BestNeighborStrategy(Strategy):
    """B claims the neighbour x of A's last vertex v maximizing |{w : d(w,x) < d(w,v)}|."""

    name = "best-neighbor-b"
    holder = Player.B

    def move(self, pos: Position) -> int:
        v = pos.a[-1]
        taken = pos.claimed
        options = [x for x in self.graph.adj[v] if x not in taken]
        if not options:
            return greedy_move(self.graph, pos, Player.B)
        return max(options, key=lambda x: (len(dominance_region(self.graph, x, v)), -x))


class BestReplyStrategy(Strategy):
    """Exact one-ply best reply for the holder (greedy on the partition score)."""

    name = "best-reply"

    def __init__(self, graph: Graph, holder: Player | str = Player.B) -> None:
        super().__init__(graph)
        self.holder = Player.parse(holder)

    def move(self, pos: Position) -> int:
        return greedy_move(self.graph, pos, self.holder)


def best_reply_factory(copy: Graph) -> Strategy:
    return BestReplyStrategy(copy, Player.B)


class HubMirrorStrategy(Strategy):
    """A takes the hub, then answers inside whichever copy B just played in.

    Each copy is treated as its own game in which B moves first; the inner
    strategy (built per copy by ``inner_factory``) supplies A's reply there.
    """

    name = "hub-mirror-a"
    holder = Player.A

    def __init__(self, graph: Graph, inner_factory: Callable[[Graph], Strategy] = best_reply_factory) -> None:
        super().__init__(graph)
        meta = graph.meta
        if meta is None or meta.family != "delta_copies":
            raise StrategyError("hub mirror needs a graph built by gen_delta_copies")
        self.hub = meta.hub
        self.copy_of = meta.copy_of
        self.copies = []
        for i in range(meta.params["delta"]):
            local, members = copy_graph(graph, i)
            self.copies.append((local, members, {v: k for k, v in enumerate(members)}, inner_factory(local)))

    def move(self, pos: Position) -> int:
        if not pos.a:
            return self.hub
        i = self.copy_of[pos.b[-1]]
        local, members, to_local, inner = self.copies[i]
        b_local = tuple(to_local[v] for v in pos.b if v in to_local)
        a_local = tuple(to_local[v] for v in pos.a if v in to_local)
        taken = pos.claimed
        if len(b_local) == len(a_local) + 1:
            v = members[inner.move(Position(b_local, a_local))]
            if v not in taken:
                return v
        for v in members:
            if v not in taken:
                return v
        return lowest_free(self.graph, pos)


class CornerPredicate:
    """Counts corners on which one side is strictly closer and tests the count.

    ``side="B"`` counts corners strictly closer to B; ``side="A"`` counts corners
    strictly closer to A. ``test(count, rounds_done)`` decides pass/fail.
    """

    def __init__(self, g: Graph, corners: Sequence[int], side: str, test: Callable[[int, int], bool], label: str = "") -> None:
        self.corners = list(corners)
        self.side = Player.parse(side)
        self.test = test
        self.label = label
        self.cd = np.ascontiguousarray(g.rows(self.corners).T)  # n x corners

    def _count(self, da: np.ndarray, db: np.ndarray) -> np.ndarray:
        if self.side is Player.B:
            return (db < da).sum(axis=-1)
        return (da < db).sum(axis=-1)

    def __call__(self, g: Graph, pos: Position, rounds_done: int) -> bool:
        da = self.cd[list(pos.a)].min(axis=0)
        db = self.cd[list(pos.b)].min(axis=0)
        return bool(self.test(int(self._count(da, db)), rounds_done))

    def batch(self, g: Graph, pos: Position, a_moves: np.ndarray, b_moves: np.ndarray, rounds_done: int) -> np.ndarray:
        big = np.iinfo(np.int32).max
        da0 = self.cd[list(pos.a)].min(axis=0) if pos.a else np.full(len(self.corners), big)
        db0 = self.cd[list(pos.b)].min(axis=0) if pos.b else np.full(len(self.corners), big)
        da = np.minimum(da0, self.cd[a_moves])
        db = np.minimum(db0, self.cd[b_moves])
        counts = self._count(da, db)
        return np.array([self.test(int(c), rounds_done) for c in counts], dtype=bool)

    def __repr__(self) -> str:
        return f"CornerPredicate({self.label or self.side.value})"


def b_closer_to_corners(g: Graph, per_round_loss: int = 1) -> CornerPredicate:
    """After round r, B is strictly closer than A to at least ``d - per_round_loss * r`` corners."""
    corners = g.meta.corners
    d = len(corners)
    return CornerPredicate(
        g, corners, "B", lambda count, r: count >= d - per_round_loss * r, f"B closer to >= d-{per_round_loss}r corners"
    )


# -- registry -----------------------------------------------------------------

REGISTRY: dict[str, tuple[Callable[..., Strategy], Player]] = {
    "central": (CentralStrategy, Player.A),
    "two-round": (TwoRoundStrategy, Player.A),
    "leg-defense": (LegDefenseStrategy, Player.B),
    "simplex-b": (SimplexStrategy, Player.B),
    "gcc-b": (GridCyclesStrategy, Player.B),
    "best-neighbor-b": (BestNeighborStrategy, Player.B),
    "hub-mirror-a": (HubMirrorStrategy, Player.A),
    "greedy-a": (lambda g: GreedyStrategy(g, Player.A), Player.A),
    "greedy-b": (lambda g: GreedyStrategy(g, Player.B), Player.B),
}


def make_strategy(name: str, graph: Graph, **params: Any) -> Strategy:
    try:
        factory, _ = REGISTRY[name]
    except KeyError:
        raise StrategyError(f"unknown strategy {name!r}; choose from {sorted(REGISTRY)}") from None
    return factory(graph, **params)


def strategy_holder(name: str) -> Player:
    return REGISTRY[name][1]


def strategy_simplex_B(graph: Graph) -> SimplexStrategy:
    return SimplexStrategy(graph)


def strategy_gcc_B(graph: Graph) -> GridCyclesStrategy:
    return GridCyclesStrategy(graph)


def strategy_best_neighbor_B(graph: Graph) -> BestNeighborStrategy:
    return BestNeighborStrategy(graph)


def strategy_hub_mirror_A(graph: Graph, inner_factory: Callable[[Graph], Strategy] = best_reply_factory) -> HubMirrorStrategy:
    return HubMirrorStrategy(graph, inner_factory)
