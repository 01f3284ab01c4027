"""Exact game values, exploit evaluation of fixed strategies, per-round checks.

The main search is alpha-beta over ``(claimsA, claimsB)`` bitmasks with a
transposition table of lower/upper bounds. B's final move is evaluated for
all candidates at once with numpy. Twin vertices (equal open or closed
neighbourhoods) are interchangeable by an automorphism fixing every other
vertex, so only the lowest unclaimed member of each twin class is expanded.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Protocol, Sequence

import numpy as np

from .graph import Graph
from .strategy import INF, Strategy, StrategyError
from .voronoi import Owner, Player, Position, PositionError, Score, partition


class SolverError(RuntimeError):
    pass


class BudgetExceeded(SolverError):
    """The node or time budget ran out before the search finished."""


@dataclass(frozen=True)
class GameSpec:
    graph: Graph
    rounds: int

    def __post_init__(self) -> None:
        if not isinstance(self.rounds, (int, np.integer)) or self.rounds < 1:
            raise ValueError(f"rounds must be a positive integer, got {self.rounds!r}")
        if 2 * self.rounds > self.graph.n:
            raise ValueError(
                f"{self.rounds} rounds need {2 * self.rounds} vertices but the graph has {self.graph.n}"
            )

    @property
    def plies(self) -> int:
        return 2 * self.rounds


class Budget:
    def __init__(self, nodes: int | None = None, seconds: float | None = None) -> None:
        self.nodes = nodes
        self.seconds = seconds
        self.count = 0
        self._start = time.monotonic()
        self._next_clock = 4096

    def tick(self, k: int = 1) -> None:
        self.count += k
        if self.nodes is not None and self.count > self.nodes:
            raise BudgetExceeded(f"node budget of {self.nodes} exceeded")
        if self.seconds is not None and self.count >= self._next_clock:
            self._next_clock = self.count + 4096
            if time.monotonic() - self._start > self.seconds:
                raise BudgetExceeded(f"time budget of {self.seconds}s exceeded")


def _moves_json(moves: Iterable[int]) -> list[int]:
    return [int(v) for v in moves]


@dataclass(frozen=True)
class SolveResult:
    value: Score
    principal_variation: tuple[int, ...]
    nodes_searched: int

    @property
    def ratio(self) -> Fraction:
        return self.value.ratio

    def to_dict(self) -> dict:
        d = self.value.to_dict()
        return {
            "value": {"half_units": d["half_units"], "n": d["n"]},
            "ratio": d["ratio"],
            "principal_variation": _moves_json(self.principal_variation),
            "nodes_searched": self.nodes_searched,
        }


@dataclass(frozen=True)
class ExploitResult:
    """Worst case of a fixed strategy against an exhaustive adversary.

    ``guaranteed_value.half_units`` is the holder's payoff (over the counted
    vertices only, when a subset was requested).
    """

    holder: Player
    guaranteed_value: Score
    witness_line: tuple[int, ...]
    line: tuple[int, ...]
    lines_searched: int

    @property
    def ratio(self) -> Fraction:
        return self.guaranteed_value.ratio

    def to_dict(self) -> dict:
        d = self.guaranteed_value.to_dict()
        return {
            "holder": self.holder.value,
            "value": {"half_units": d["half_units"], "n": d["n"]},
            "ratio": d["ratio"],
            "witness_line": _moves_json(self.witness_line),
            "line": _moves_json(self.line),
            "lines_searched": self.lines_searched,
        }


def twin_classes(g: Graph) -> list[list[int]]:
    """Classes of size >= 2 of vertices with equal open or equal closed neighbourhoods."""
    groups: dict[tuple, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(("open", g.adj[v]), []).append(v)
        groups.setdefault(("closed", tuple(sorted(g.adj[v] + (v,)))), []).append(v)
    return [members for members in groups.values() if len(members) > 1]


class _Search:
    def __init__(
        self,
        g: Graph,
        rounds: int,
        *,
        memo: bool,
        prune: bool,
        reduce_twins: bool,
        budget: Budget,
    ) -> None:
        self.g = g
        self.n = g.n
        self.plies = 2 * rounds
        self.D = g.distance_matrix()
        self.memo = memo
        self.prune = prune
        self.budget = budget
        self.bit = [1 << v for v in range(self.n)]
        self.full = (1 << self.n) - 1
        self.order = sorted(range(self.n), key=lambda v: (-len(g.adj[v]), v))
        self.twin_prev = [0] * self.n
        if reduce_twins:
            for members in twin_classes(g):
                for i, v in enumerate(members):
                    for u in members[:i]:
                        self.twin_prev[v] |= self.bit[u]
        self.tt: dict[tuple[int, int], tuple[int, int]] = {}
        self.top = 2 * self.n + 1

    def candidates(self, free: int, ascending: bool = False) -> list[int]:
        seq = range(self.n) if ascending else self.order
        tp = self.twin_prev
        return [v for v in seq if (free >> v) & 1 and not (tp[v] & free)]

    def last_ply(self, free: int, da: np.ndarray, db: np.ndarray) -> tuple[int, int]:
        """B's final move over all candidates; returns (min A score, lowest-id argmin)."""
        cands = self.candidates(free, ascending=True)
        self.budget.tick(len(cands))
        m = np.minimum(db, self.D[cands])
        s = 2 * (da < m).sum(axis=1) + (da == m).sum(axis=1)
        i = int(np.argmin(s))
        return int(s[i]), cands[i]

    def value(self, ma: int, mb: int, da: np.ndarray, db: np.ndarray, ply: int, alpha: int, beta: int) -> int:
        free = self.full & ~(ma | mb)
        if ply == self.plies - 1:
            return self.last_ply(free, da, db)[0]
        self.budget.tick()
        if not self.prune:
            alpha, beta = -1, self.top
        key = (ma, mb)
        if self.memo:
            entry = self.tt.get(key)
            if entry is not None:
                lo, hi = entry
                if lo == hi or lo >= beta:
                    return lo
                if hi <= alpha:
                    return hi
                alpha = max(alpha, lo)
                beta = min(beta, hi)
        a0, b0 = alpha, beta
        D = self.D
        bit = self.bit
        if ply % 2 == 0:
            best = -1
            for v in self.candidates(free):
                r = self.value(ma | bit[v], mb, np.minimum(da, D[v]), db, ply + 1, alpha, beta)
                if r > best:
                    best = r
                    if best > alpha:
                        alpha = best
                        if self.prune and alpha >= beta:
                            break
        else:
            best = self.top
            for v in self.candidates(free):
                r = self.value(ma, mb | bit[v], da, np.minimum(db, D[v]), ply + 1, alpha, beta)
                if r < best:
                    best = r
                    if best < beta:
                        beta = best
                        if self.prune and alpha >= beta:
                            break
        if self.memo:
            lo, hi = self.tt.get(key, (0, 2 * self.n))
            if best <= a0:
                hi = min(hi, best)
            elif best >= b0:
                lo = max(lo, best)
            else:
                lo = hi = best
            self.tt[key] = (lo, hi)
        return best

    def root(self) -> int:
        inf = np.full(self.n, INF, dtype=np.int32)
        return self.value(0, 0, inf, inf, 0, -1, self.top)

    def principal_variation(self, target: int) -> tuple[int, ...]:
        """Lowest-id move sequence realizing ``target`` under optimal play."""
        ma = mb = 0
        da = np.full(self.n, INF, dtype=np.int32)
        db = da.copy()
        pv: list[int] = []
        for ply in range(self.plies):
            free = self.full & ~(ma | mb)
            if ply == self.plies - 1:
                s, v = self.last_ply(free, da, db)
                if s != target:
                    raise SolverError("principal variation does not reproduce the root value")
                pv.append(v)
                break
            for v in self.candidates(free, ascending=True):
                if ply % 2 == 0:
                    nda, ndb, nma, nmb = np.minimum(da, self.D[v]), db, ma | self.bit[v], mb
                    r = self.value(nma, nmb, nda, ndb, ply + 1, target - 1, target)
                    hit = r >= target
                else:
                    nda, ndb, nma, nmb = da, np.minimum(db, self.D[v]), ma, mb | self.bit[v]
                    r = self.value(nma, nmb, nda, ndb, ply + 1, target, target + 1)
                    hit = r <= target
                if hit:
                    pv.append(v)
                    ma, mb, da, db = nma, nmb, nda, ndb
                    break
            else:
                raise SolverError(f"no move at ply {ply} reproduces the root value {target}")
        return tuple(pv)


def solve(
    spec: GameSpec,
    *,
    budget_nodes: int | None = None,
    budget_seconds: float | None = None,
    memo: bool = True,
    prune: bool = True,
    reduce_twins: bool = True,
) -> SolveResult:
    """Exact value of the ``spec.rounds``-round game; A maximizes her half-units.

    Raises :class:`BudgetExceeded` rather than returning an approximation.
    """
    budget = Budget(budget_nodes, budget_seconds)
    search = _Search(spec.graph, spec.rounds, memo=memo, prune=prune, reduce_twins=reduce_twins, budget=budget)
    v = search.root()
    pv = search.principal_variation(v)
    return SolveResult(Score(v, spec.graph.n), pv, budget.count)


def voronoi_ratio(g: Graph, rounds: int, **kwargs) -> Fraction:
    return solve(GameSpec(g, rounds), **kwargs).value.ratio


def minimax_reference(g: Graph, rounds: int) -> Score:
    """Plain minimax over every move order, scored by :func:`partition`.

    No memo, no pruning, no numpy. Exponential; meant as a test oracle.
    """
    GameSpec(g, rounds)
    plies = 2 * rounds

    def rec(pos: Position) -> int:
        if pos.plies == plies:
            return partition(g, pos).score.half_units
        taken = pos.claimed
        vals = [rec(pos.play(v)) for v in range(g.n) if v not in taken]
        return max(vals) if pos.to_move is Player.A else min(vals)

    return Score(rec(Position()), g.n)


# -- fixed-strategy evaluation ---------------------------------------------


def _holder_payoff(
    rows_a: np.ndarray, rows_b: np.ndarray, da: np.ndarray, db: np.ndarray, mask: np.ndarray, holder: Player
) -> np.ndarray:
    ma = np.minimum(da, rows_a)
    mb = np.minimum(db, rows_b)
    a_half = 2 * ((ma < mb) & mask).sum(axis=1) + ((ma == mb) & mask).sum(axis=1)
    if holder is Player.A:
        return a_half
    return 2 * int(mask.sum()) - a_half


def _checked(g: Graph, pos: Position, v: int, strategy: Strategy) -> int:
    v = int(v)
    if not 0 <= v < g.n or v in pos.claimed:
        raise StrategyError(
            f"{strategy.name} played illegal vertex {v} after moves {list(pos.moves())}"
        )
    return v


def _checked_batch(g: Graph, pos: Position, opp: np.ndarray, replies: np.ndarray, strategy: Strategy) -> None:
    taken = np.zeros(g.n + 1, dtype=bool)
    taken[list(pos.claimed)] = True
    safe = np.where((replies >= 0) & (replies < g.n), replies, g.n)
    bad = (safe == g.n) | taken[safe] | (replies == opp)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise StrategyError(
            f"{strategy.name} played illegal vertex {int(replies[i])} after moves "
            f"{list(pos.moves()) + [int(opp[i])]}"
        )


def _free(g: Graph, pos: Position) -> np.ndarray:
    mask = np.ones(g.n, dtype=bool)
    mask[list(pos.claimed)] = False
    return np.flatnonzero(mask)


def _adversary_of(moves: Sequence[int], holder: Player) -> tuple[int, ...]:
    return tuple(moves[1::2] if holder is Player.A else moves[0::2])


def replay(spec: GameSpec, strategy: Strategy, holder: Player | str, adversary_moves: Sequence[int]) -> Position:
    """Play ``adversary_moves`` against ``strategy`` and return the final position."""
    holder = Player.parse(holder)
    adv = list(adversary_moves)
    pos = Position()
    for _ in range(spec.plies):
        if pos.to_move is holder:
            pos = pos.play(_checked(spec.graph, pos, strategy.move(pos), strategy))
        else:
            if not adv:
                raise ValueError("adversary line is too short")
            pos = pos.play(adv.pop(0))
    return pos


def holder_score(spec: GameSpec, pos: Position, holder: Player, counted: Sequence[int] | None = None) -> Score:
    part = partition(spec.graph, pos)
    idx = range(spec.graph.n) if counted is None else counted
    half = 0
    for v in idx:
        o = part.owner[v]
        if o is Owner.TIED:
            half += 1
        elif o.value == holder.value:
            half += 2
    return Score(half, len(idx))


def exploit(
    spec: GameSpec,
    strategy: Strategy,
    holder: Player | str,
    *,
    counted: Sequence[int] | None = None,
    budget_nodes: int | None = None,
    budget_seconds: float | None = None,
) -> ExploitResult:
    """Holder's guaranteed payoff when ``strategy`` faces every adversary line.

    Only adversary moves are branched on. ``counted`` restricts the payoff to a
    vertex subset (e.g. broom leaves); the witness is the first adversary line,
    in ascending vertex order, that attains the minimum.
    """
    holder = Player.parse(holder)
    g = spec.graph
    mask = np.zeros(g.n, dtype=bool)
    if counted is None:
        mask[:] = True
    else:
        mask[list(counted)] = True
    n_counted = int(mask.sum())
    budget = Budget(budget_nodes, budget_seconds)
    best: list = [None, None]  # payoff, full line
    plies = spec.plies

    def finish(pos: Position) -> None:
        # pos: A is about to make her final move
        da = g.rows(pos.a).min(axis=0) if pos.a else np.full(g.n, INF, dtype=np.int32)
        db = g.rows(pos.b).min(axis=0) if pos.b else np.full(g.n, INF, dtype=np.int32)
        if holder is Player.B:
            a_moves = _free(g, pos)
            b_moves = np.asarray(strategy.move_batch(pos, a_moves), dtype=np.int64)
            _checked_batch(g, pos, a_moves, b_moves, strategy)
        else:
            a = _checked(g, pos, strategy.move(pos), strategy)
            b_moves = _free(g, pos.play(a))
            a_moves = np.full(len(b_moves), a, dtype=np.int64)
        budget.tick(len(a_moves))
        pay = _holder_payoff(g.rows(a_moves), g.rows(b_moves), da, db, mask, holder)
        i = int(np.argmin(pay))
        if best[0] is None or pay[i] < best[0]:
            best[0] = int(pay[i])
            best[1] = pos.moves() + (int(a_moves[i]), int(b_moves[i]))

    def rec(pos: Position) -> None:
        if pos.plies == plies - 2:
            finish(pos)
            return
        budget.tick()
        if pos.to_move is holder:
            rec(pos.play(_checked(g, pos, strategy.move(pos), strategy)))
        else:
            for v in _free(g, pos):
                rec(pos.play(int(v)))

    rec(Position())
    line = best[1]
    return ExploitResult(holder, Score(best[0], n_counted), _adversary_of(line, holder), line, budget.count)


class RoundPredicate(Protocol):
    def __call__(self, g: Graph, pos: Position, rounds_done: int) -> bool: ...


@dataclass(frozen=True)
class RoundCheckResult:
    passed: bool
    rounds: int
    lines_checked: int
    failed_round: int | None = None
    witness_line: tuple[int, ...] | None = None
    checks: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "rounds": self.rounds,
            "lines_checked": self.lines_checked,
            "failed_round": self.failed_round,
            "witness_line": None if self.witness_line is None else _moves_json(self.witness_line),
        }


def per_round_check(
    spec: GameSpec,
    strategy: Strategy,
    predicate: RoundPredicate | Callable[[Graph, Position, int], bool],
    holder: Player | str = Player.B,
    *,
    budget_nodes: int | None = None,
    budget_seconds: float | None = None,
) -> RoundCheckResult:
    """Check ``predicate`` after every round on every adversary line.

    Stops at the first failing line and returns it as the witness. A predicate
    exposing ``batch(g, pos, a_moves, b_moves, r) -> bool array`` lets the last
    round be checked for all adversary moves at once.
    """
    holder = Player.parse(holder)
    g = spec.graph
    t = spec.rounds
    budget = Budget(budget_nodes, budget_seconds)
    batch = getattr(predicate, "batch", None)
    failure: list = []

    def fail(pos: Position, r: int) -> bool:
        failure.extend([r, pos.moves()])
        return False

    def last_round(pos: Position) -> bool:
        if holder is Player.B:
            a_moves = _free(g, pos)
            b_moves = np.asarray(strategy.move_batch(pos, a_moves), dtype=np.int64)
            _checked_batch(g, pos, a_moves, b_moves, strategy)
        else:
            a = _checked(g, pos, strategy.move(pos), strategy)
            b_moves = _free(g, pos.play(a))
            a_moves = np.full(len(b_moves), a, dtype=np.int64)
        budget.tick(len(a_moves))
        ok = np.asarray(batch(g, pos, a_moves, b_moves, t), dtype=bool)
        if not ok.all():
            i = int(np.flatnonzero(~ok)[0])
            return fail(pos.play(int(a_moves[i])).play(int(b_moves[i])), t)
        return True

    def rec(pos: Position) -> bool:
        if pos.plies and pos.plies % 2 == 0:
            r = pos.rounds_completed
            if not predicate(g, pos, r):
                return fail(pos, r)
            if r == t:
                return True
        if batch is not None and pos.plies == 2 * t - 2:
            return last_round(pos)
        budget.tick()
        if pos.to_move is holder:
            return rec(pos.play(_checked(g, pos, strategy.move(pos), strategy)))
        for v in _free(g, pos):
            if not rec(pos.play(int(v))):
                return False
        return True

    ok = rec(Position())
    if ok:
        return RoundCheckResult(True, t, budget.count)
    return RoundCheckResult(False, t, budget.count, failure[0], failure[1])


def always_true(g: Graph, pos: Position, rounds_done: int) -> bool:
    return True


__all__ = [
    "BudgetExceeded",
    "ExploitResult",
    "GameSpec",
    "PositionError",
    "RoundCheckResult",
    "SolveResult",
    "SolverError",
    "exploit",
    "holder_score",
    "minimax_reference",
    "per_round_check",
    "replay",
    "solve",
    "twin_classes",
    "voronoi_ratio",
]
