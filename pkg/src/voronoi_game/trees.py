"""Edge weights, central vertex/edge and threshold vertices of trees, plus the
tree strategies built on them.

Comparisons against ``n/3`` and ``n/2`` are done as ``3*size`` vs ``n`` and
``2*size`` vs ``n`` so no fractions are involved.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .graph import Graph, GraphError
from .strategy import Strategy, StrategyError, free_vertices, greedy_move, player_distances
from .voronoi import Player, Position


class NotATreeError(GraphError):
    pass


def _require_tree(g: Graph) -> None:
    if not g.is_tree():
        raise NotATreeError(f"expected a tree, got {g.n} vertices and {g.num_edges} edges")


@dataclass(frozen=True)
class WeightedOrientation:
    """Edge weights (size of the smaller side) and smaller-to-larger orientation.

    ``out[v]`` is the head of v's outgoing arc or ``None``; ``side[(u, v)]`` is
    the number of vertices on v's side once the edge uv is removed.
    """

    n: int
    weight: dict[tuple[int, int], int]
    out: tuple[int | None, ...]
    side: dict[tuple[int, int], int]
    roots: tuple[int, ...]

    @property
    def central_vertex(self) -> int | None:
        return self.roots[0] if len(self.roots) == 1 else None

    @property
    def central_edge(self) -> tuple[int, int] | None:
        return (self.roots[0], self.roots[1]) if len(self.roots) == 2 else None

    def edge_weight(self, u: int, v: int) -> int:
        return self.weight[(min(u, v), max(u, v))]

    def incoming(self, v: int, adj: Iterable[int]) -> list[int]:
        return [w for w in adj if self.out[w] == v]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "edges": [
                {"edge": [u, v], "weight": w, "direction": self._direction(u, v)}
                for (u, v), w in sorted(self.weight.items())
            ],
            "roots": list(self.roots),
        }

    def _direction(self, u: int, v: int) -> list[int] | None:
        if self.out[u] == v:
            return [u, v]
        if self.out[v] == u:
            return [v, u]
        return None


def weight_and_orient(tree: Graph) -> WeightedOrientation:
    _require_tree(tree)
    n = tree.n
    parent = [-1] * n
    order = [0]
    seen = [False] * n
    seen[0] = True
    for u in order:
        for w in tree.adj[u]:
            if not seen[w]:
                seen[w] = True
                parent[w] = u
                order.append(w)
    size = [1] * n
    for u in reversed(order[1:]):
        size[parent[u]] += size[u]

    weight: dict[tuple[int, int], int] = {}
    side: dict[tuple[int, int], int] = {}
    out: list[int | None] = [None] * n
    for ch in order[1:]:
        p = parent[ch]
        s = size[ch]
        side[(p, ch)] = s
        side[(ch, p)] = n - s
        weight[(min(p, ch), max(p, ch))] = min(s, n - s)
        if 2 * s < n:
            out[ch] = p
        elif 2 * s > n:
            out[p] = ch
    roots = tuple(v for v in range(n) if out[v] is None)
    return WeightedOrientation(n, weight, tuple(out), side, roots)


def tree_path(tree: Graph, u: int, v: int) -> list[int]:
    """Vertices of the unique u-v path, inclusive."""
    prev = {u: None}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == v:
            break
        for w in tree.adj[x]:
            if w not in prev:
                prev[w] = x
                queue.append(w)
    path = [v]
    while path[-1] != u:
        path.append(prev[path[-1]])
    return path[::-1]


def component_sizes(g: Graph, removed: Iterable[int]) -> list[int]:
    """Sizes of the connected components of ``g`` minus ``removed``."""
    gone = set(removed)
    seen = set(gone)
    sizes = []
    for s in range(g.n):
        if s in seen:
            continue
        seen.add(s)
        stack = [s]
        count = 0
        while stack:
            x = stack.pop()
            count += 1
            for w in g.adj[x]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        sizes.append(count)
    return sizes


@dataclass(frozen=True)
class ThresholdResult:
    """Either ``single`` (the central vertex ``u`` works alone) or ``pair`` ``(u, v)``.

    ``size_u``/``size_v`` are the sizes of the components of u and v after the
    edges of the u-v path are deleted. ``thresholds`` lists every threshold
    vertex found by the walk.
    """

    kind: str
    u: int
    v: int | None
    size_u: int | None
    size_v: int | None
    thresholds: tuple[int, ...]

    @property
    def is_single(self) -> bool:
        return self.kind == "single"

    def to_dict(self) -> dict:
        if self.is_single:
            return {"kind": "single", "c": self.u, "thresholds": list(self.thresholds)}
        return {
            "kind": "pair",
            "u": self.u,
            "v": self.v,
            "size_u": self.size_u,
            "size_v": self.size_v,
            "thresholds": list(self.thresholds),
        }


def threshold_vertices(tree: Graph, wo: WeightedOrientation | None = None) -> list[int]:
    """Walk down from the root(s) along incoming arcs heavier than n/3."""
    wo = wo or weight_and_orient(tree)
    n = tree.n
    found = []
    stack = list(wo.roots)
    while stack:
        x = stack.pop()
        heavy = [w for w in wo.incoming(x, tree.adj[x]) if 3 * wo.edge_weight(w, x) > n]
        if heavy:
            stack.extend(heavy)
        else:
            found.append(x)
    return sorted(found)


def is_threshold_vertex(tree: Graph, wo: WeightedOrientation, x: int) -> bool:
    n = tree.n
    if any(3 * wo.edge_weight(w, x) > n for w in wo.incoming(x, tree.adj[x])):
        return False
    head = wo.out[x]
    return head is None or 3 * wo.edge_weight(x, head) > n


def find_threshold(tree: Graph) -> ThresholdResult:
    wo = weight_and_orient(tree)
    found = threshold_vertices(tree, wo)
    if not 1 <= len(found) <= 2:
        raise AssertionError(f"found {len(found)} threshold vertices; at most two can exist")
    c = wo.central_vertex
    if len(found) == 1 and found[0] == c:
        return ThresholdResult("single", c, None, None, None, tuple(found))
    if len(found) == 2:
        u, v = found
    else:
        # a lone threshold vertex away from the centre is paired with the centre
        u, v = found[0], c
    path = tree_path(tree, u, v)
    size_u = wo.side[(path[1], u)]
    size_v = wo.side[(path[-2], v)]
    return ThresholdResult("pair", u, v, size_u, size_v, tuple(found))


def children_components(tree: Graph, u: int, v: int) -> list[tuple[int, int, int]]:
    """``(size, child, parent)`` for each neighbour of u or v off the u-v path."""
    wo = weight_and_orient(tree)
    on_path = set(tree_path(tree, u, v))
    out = []
    for p in (u, v):
        for x in tree.adj[p]:
            if x not in on_path:
                out.append((wo.side[(p, x)], x, p))
    return out


# -- strategies ---------------------------------------------------------------


def last_reply_floor(g: Graph, pos: Position, candidates) -> np.ndarray:
    """A's half-units after playing each candidate, minimized over B's single reply."""
    cands = np.asarray(candidates, dtype=np.int64)
    da = np.minimum(player_distances(g, pos.a)[None, :], g.rows(cands))
    db = player_distances(g, pos.b)
    out = np.empty(len(cands), dtype=np.int64)
    taken = np.zeros(g.n, dtype=bool)
    taken[list(pos.claimed)] = True
    for k, a in enumerate(cands):
        replies = np.flatnonzero(~taken)
        replies = replies[replies != a]
        mb = np.minimum(db[None, :], g.rows(replies))
        ma = da[k][None, :]
        out[k] = (2 * (ma < mb).sum(axis=1) + (ma == mb).sum(axis=1)).min()
    return out


class CentralStrategy(Strategy):
    """First move on the central vertex (lower endpoint of a central edge); greedy afterwards."""

    name = "central"
    holder = Player.A

    def __init__(self, tree: Graph) -> None:
        super().__init__(tree)
        wo = weight_and_orient(tree)
        self.first = min(wo.roots)

    def move(self, pos: Position) -> int:
        if not pos.a:
            return self.first
        return greedy_move(self.graph, pos, Player.A)


class TwoRoundStrategy(Strategy):
    """A's two-round plan built on the threshold vertices.

    Single: open on the centre. Pair: with ``u'`` the child of u or v whose
    outer component is largest and ``p`` its parent, open on the other vertex
    ``q``; then take ``p`` if B left it, otherwise take ``u'``. Histories the
    plan does not cover fall back to the greedy move. When the planned second
    move can be held to exactly n/3 by B's last pebble, a free vertex with a
    strictly better worst case is played instead (if one exists). If even the
    opening cannot beat n/3 this way, the opening with the best two-round
    floor is used. ``safeguard=False`` plays the bare plan.
    """

    name = "two-round"
    holder = Player.A

    def __init__(self, tree: Graph, safeguard: bool = True) -> None:
        super().__init__(tree, safeguard=safeguard)
        self.safeguard = safeguard
        self.threshold = res = find_threshold(tree)
        self.parent = self.child = None
        if res.is_single:
            self.first = res.u
        else:
            kids = children_components(tree, res.u, res.v)
            if kids:
                size, child, parent = min(kids, key=lambda k: (-k[0], k[1]))
                self.child, self.parent = child, parent
                self.first = res.v if parent == res.u else res.u
            else:
                self.parent, self.first = res.u, res.v
        self.planned_first = self.first
        if safeguard and tree.n >= 4 and 3 * self.opening_floor(self.first) <= 2 * tree.n:
            floors = [self.opening_floor(o) for o in range(tree.n)]
            self.first = max(range(tree.n), key=lambda o: (floors[o], -o))

    def opening_floor(self, o: int) -> int:
        """A's half-units after opening on ``o``, with her second move played by this strategy."""
        g = self.graph
        worst = 2 * g.n
        saved, self.first = self.first, o
        try:
            for b in range(g.n):
                if b == o:
                    continue
                pos = Position((o,), (b,))
                worst = min(worst, int(last_reply_floor(g, pos, [self.move(pos)])[0]))
        finally:
            self.first = saved
        return worst

    def planned(self, pos: Position) -> int:
        """The move the case analysis prescribes (greedy where it is silent)."""
        if not pos.a:
            return self.first
        if len(pos.a) == 1 and self.parent is not None:
            taken = pos.claimed
            if self.parent not in taken:
                return self.parent
            if self.child is not None and self.child not in taken:
                return self.child
        return greedy_move(self.graph, pos, Player.A)

    def move(self, pos: Position) -> int:
        v = self.planned(pos)
        if len(pos.a) != 1 or not self.safeguard:
            return v
        # The case analysis only promises n/3 when B's last two pebbles each
        # swallow a component of exactly n/3; swap in a strictly safer move then.
        g = self.graph
        if 3 * int(last_reply_floor(g, pos, [v])[0]) > 2 * g.n:
            return v
        cands = free_vertices(g, pos)
        floors = last_reply_floor(g, pos, cands)
        best = int(np.argmax(floors))
        return int(cands[best]) if 3 * int(floors[best]) > 2 * g.n else v


class LegDefenseStrategy(Strategy):
    """B's strategy on the broom-leg tree.

    If A opens on the centre, B takes the head vertex, then the top of a leg A
    has not touched, and defends that leg. Otherwise B takes the centre and
    defends whichever leg A plays on; when A plays in the head broom, B covers
    the spot below A's opening move. "Any available vertex" is resolved by the
    greedy move.
    """

    name = "leg-defense"
    holder = Player.B

    def __init__(self, tree: Graph) -> None:
        super().__init__(tree)
        meta = tree.meta
        if meta is None or getattr(meta, "family", None) != "broom_leg_tree":
            raise StrategyError("leg defense needs a graph built by gen_broom_leg_tree")
        self.c = meta.center
        self.h = meta.head
        self.head_part = frozenset(meta.head_leaves) | {meta.head}
        self.legs = meta.legs
        self.leg_of: dict[int, int] = {}
        self.below: dict[int, int] = {}
        self.broom_of_leaf: dict[int, int] = {}
        self.on_path: dict[int, int] = {}
        self.tops = {leg.path[0]: i for i, leg in enumerate(meta.legs)}
        for i, leg in enumerate(meta.legs):
            for v in leg.path:
                self.on_path[v] = i
            for v in leg.vertices:
                self.leg_of[v] = i
            for a, b in zip(leg.path, leg.path[1:]):
                self.below[a] = b
            for centre, leaves in leg.brooms:
                for x in leaves:
                    self.broom_of_leaf[x] = centre

    def _greedy(self, pos: Position) -> int:
        return greedy_move(self.graph, pos, Player.B)

    def _defend(self, pos: Position, leg: int, v: int) -> int:
        if self.leg_of.get(v) != leg:
            return self._greedy(pos)
        target = self.below.get(v) if v in self.on_path else self.broom_of_leaf[v]
        if target is not None and target not in pos.claimed:
            return target
        return self._greedy(pos)

    def _cover_opening(self, pos: Position) -> int:
        first = pos.a[0]
        if first in self.broom_of_leaf:
            target = self.broom_of_leaf[first]
        else:
            target = self.below.get(first)
        if target is not None and target not in pos.claimed:
            return target
        return self._greedy(pos)

    def move(self, pos: Position) -> int:
        a, r = pos.a, len(pos.b)
        last = a[-1]
        if r == 0:
            return self.h if last == self.c else self.c
        if a[0] == self.c:
            if r == 1:
                touched = {self.leg_of[x] for x in a if x in self.leg_of}
                for i, leg in enumerate(self.legs):
                    if i not in touched and leg.path[0] not in pos.claimed:
                        return leg.path[0]
                return self._greedy(pos)
            defended = self.tops.get(pos.b[1])
            if defended is None:
                return self._greedy(pos)
            return self._defend(pos, defended, last)
        if last in self.leg_of:
            return self._defend(pos, self.leg_of[last], last)
        if last in self.head_part and a[0] in self.leg_of:
            return self._cover_opening(pos)
        return self._greedy(pos)


def strategy_central(tree: Graph) -> CentralStrategy:
    return CentralStrategy(tree)


def strategy_two_round(tree: Graph) -> TwoRoundStrategy:
    return TwoRoundStrategy(tree)


def strategy_leg_defense(tree: Graph) -> LegDefenseStrategy:
    return LegDefenseStrategy(tree)
