"""Positions, exact scores and the graph Voronoi partition.

Scores are kept in half-vertex units so that ties never need floating point:
an owned vertex is worth 2, a tied vertex 1 to each side.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .graph import Graph, GraphError


class Owner(enum.Enum):
    A = "A"
    B = "B"
    TIED = "TIED"


class Player(str, enum.Enum):
    A = "A"
    B = "B"

    @property
    def other(self) -> "Player":
        return Player.B if self is Player.A else Player.A

    @classmethod
    def parse(cls, value: "str | Player") -> "Player":
        if isinstance(value, Player):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValueError(f"unknown player {value!r}; expected 'A' or 'B'") from None


class PositionError(ValueError):
    """Raised for illegal claim sets or moves."""


@dataclass(frozen=True)
class Position:
    """Claims made so far; A moved first, so ``len(a)`` is ``len(b)`` or ``len(b) + 1``."""

    a: tuple[int, ...] = ()
    b: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))
        object.__setattr__(self, "b", tuple(int(v) for v in self.b))
        if len(set(self.a) | set(self.b)) != len(self.a) + len(self.b):
            raise PositionError(f"a vertex is claimed twice in A={self.a} B={self.b}")
        if len(self.a) - len(self.b) not in (0, 1):
            raise PositionError(f"claims do not alternate: |A|={len(self.a)}, |B|={len(self.b)}")

    @classmethod
    def from_moves(cls, moves: Iterable[int]) -> "Position":
        moves = list(moves)
        return cls(tuple(moves[0::2]), tuple(moves[1::2]))

    @property
    def to_move(self) -> Player:
        return Player.A if len(self.a) == len(self.b) else Player.B

    @property
    def plies(self) -> int:
        return len(self.a) + len(self.b)

    @property
    def rounds_completed(self) -> int:
        return len(self.b)

    @property
    def claimed(self) -> frozenset[int]:
        return frozenset(self.a) | frozenset(self.b)

    def moves(self) -> tuple[int, ...]:
        """Interleaved move list A, B, A, B, ..."""
        out: list[int] = []
        for i, v in enumerate(self.a):
            out.append(v)
            if i < len(self.b):
                out.append(self.b[i])
        return tuple(out)

    def play(self, v: int) -> "Position":
        if v in self.a or v in self.b:
            raise PositionError(f"vertex {v} is already claimed")
        if self.to_move is Player.A:
            return Position(self.a + (v,), self.b)
        return Position(self.a, self.b + (v,))

    def claims(self, player: Player) -> tuple[int, ...]:
        return self.a if player is Player.A else self.b

    def swapped(self) -> "Position":
        """Exchange the roles (ignores alternation, used for symmetry checks)."""
        pos = object.__new__(Position)
        object.__setattr__(pos, "a", self.b)
        object.__setattr__(pos, "b", self.a)
        return pos


@dataclass(frozen=True, order=True)
class Score:
    """A's payoff in half-vertex units out of ``2 * n``."""

    half_units: int
    n: int

    def __post_init__(self) -> None:
        if not 0 <= self.half_units <= 2 * self.n:
            raise ValueError(f"half_units={self.half_units} outside [0, {2 * self.n}]")

    @property
    def b_half_units(self) -> int:
        return 2 * self.n - self.half_units

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.half_units, 2 * self.n)

    @property
    def vertices(self) -> Fraction:
        return Fraction(self.half_units, 2)

    def flipped(self) -> "Score":
        return Score(self.b_half_units, self.n)

    def to_dict(self) -> dict:
        r = self.ratio
        return {"half_units": self.half_units, "n": self.n, "ratio": f"{r.numerator}/{r.denominator}"}


@dataclass(frozen=True)
class Partition:
    score: Score
    owner: tuple[Owner, ...] = field(repr=False)

    def count(self, who: Owner) -> int:
        return sum(1 for o in self.owner if o is who)


def _min_distances(g: Graph, sources: Sequence[int]) -> list[int]:
    rows = [g.distances_from(s) for s in sources]
    return [min(col) for col in zip(*rows)]


def partition(g: Graph, pos: Position) -> Partition:
    """Split the vertices of ``g`` between the players of ``pos``.

    A vertex belongs to the player whose nearest claimed vertex is strictly
    closer; equidistant vertices are tied. Claimed vertices sit at distance 0
    from their claimer and so belong to them.
    """
    if not pos.a or not pos.b:
        raise PositionError("both players need at least one claimed vertex")
    for v in pos.a + pos.b:
        if not 0 <= v < g.n:
            raise GraphError(f"invalid vertex id {v} for graph with n={g.n}")
    da = _min_distances(g, pos.a)
    db = _min_distances(g, pos.b)
    owner = []
    half = 0
    for x, y in zip(da, db):
        if x < y:
            owner.append(Owner.A)
            half += 2
        elif x > y:
            owner.append(Owner.B)
        else:
            owner.append(Owner.TIED)
            half += 1
    return Partition(Score(half, g.n), tuple(owner))


def score(g: Graph, pos: Position) -> Score:
    return partition(g, pos).score


def dominance_region(g: Graph, x: int, v: int) -> frozenset[int]:
    """Vertices strictly closer to ``x`` than to ``v``."""
    if x == v:
        raise GraphError("dominance region needs two distinct vertices")
    dx = g.distances_from(x)
    dv = g.distances_from(v)
    return frozenset(w for w in range(g.n) if dx[w] < dv[w])
