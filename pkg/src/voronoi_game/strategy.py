"""Base class for fixed strategies plus the fallback moves they share."""

from __future__ import annotations

from typing import Any

import numpy as np

from .graph import Graph
from .voronoi import Player, Position

INF = np.int32(1 << 28)


class StrategyError(RuntimeError):
    """A strategy could not produce a legal move (or its metadata is missing)."""


class Strategy:
    """Deterministic move rule for one player.

    Subclasses implement :meth:`move`. The graph (and whatever family metadata
    it carries) is bound at construction; a move depends only on the history
    in the :class:`Position`.
    """

    name = "strategy"
    holder = Player.A

    def __init__(self, graph: Graph, **params: Any) -> None:
        self.graph = graph
        self.params = params

    def __repr__(self) -> str:
        return f"{type(self).__name__}(holder={self.holder.value}, {self.params})"

    def move(self, pos: Position) -> int:
        raise NotImplementedError

    def move_batch(self, pos: Position, opponent_moves: np.ndarray) -> np.ndarray:
        """Replies to each of ``opponent_moves`` played from ``pos``.

        Overridden by strategies that can vectorize their reply.
        """
        return np.array([self.move(pos.play(int(x))) for x in opponent_moves], dtype=np.int64)

    def to_dict(self) -> dict:
        return {"name": self.name, "holder": self.holder.value, "params": dict(self.params)}


def player_distances(g: Graph, claims: tuple[int, ...]) -> np.ndarray:
    if not claims:
        return np.full(g.n, INF, dtype=np.int32)
    return g.rows(claims).min(axis=0)


def free_vertices(g: Graph, pos: Position) -> np.ndarray:
    mask = np.ones(g.n, dtype=bool)
    claimed = list(pos.claimed)
    mask[claimed] = False
    return np.flatnonzero(mask)


def lowest_free(g: Graph, pos: Position) -> int:
    taken = pos.claimed
    for v in range(g.n):
        if v not in taken:
            return v
    raise StrategyError("no unclaimed vertex left")


def greedy_move(g: Graph, pos: Position, player: Player | None = None) -> int:
    """Unclaimed vertex maximizing ``player``'s immediate partition score.

    Ties go to the lowest id. With the opponent still empty-handed every
    vertex looks equally good and the lowest free id is returned.
    """
    player = pos.to_move if player is None else player
    free = free_vertices(g, pos)
    if len(free) == 0:
        raise StrategyError("no unclaimed vertex left")
    da = player_distances(g, pos.a)
    db = player_distances(g, pos.b)
    cand = g.rows(free)
    if player is Player.A:
        m = np.minimum(da, cand)
        gain = 2 * (m < db).sum(axis=1) + (m == db).sum(axis=1)
    else:
        m = np.minimum(db, cand)
        gain = 2 * (m < da).sum(axis=1) + (m == da).sum(axis=1)
    return int(free[int(np.argmax(gain))])
