from fractions import Fraction

import numpy as np
import pytest

from voronoi_game.enumerate import enumerate_connected, random_bounded_degree
from voronoi_game.families import (
    cut_corner_points,
    gen_delta_copies,
    gen_grid_connected_cycles,
    gen_nine_vertex,
    gen_path,
    gen_simplex,
    gen_star,
)
from voronoi_game.solver import GameSpec, exploit, per_round_check, replay
from voronoi_game.strategies import (
    REGISTRY,
    BestNeighborStrategy,
    CornerPredicate,
    GridCyclesStrategy,
    HubMirrorStrategy,
    SimplexStrategy,
    b_closer_to_corners,
    make_strategy,
    project_pi,
    strategy_holder,
)
from voronoi_game.strategy import StrategyError, lowest_free
from voronoi_game.voronoi import Player, Position, partition


def test_project_pi_examples():
    assert project_pi((9, 0, 0), 0) == (7, 1, 1)
    assert project_pi((4, 4), 0, L=4) == (3, 4)
    for x in [(9, 0, 0), (3, 3, 3), (5, 2, 2)]:
        for i in range(3):
            if x[i] >= 2:
                assert project_pi(x, i) != x


def test_project_pi_rejects_leaving_the_vertex_set():
    with pytest.raises(ValueError):
        project_pi((1, 8, 0), 0)
    with pytest.raises(ValueError):
        project_pi((0, 2), 0, L=2)
    with pytest.raises(ValueError):
        project_pi((1, 2), 5)


def test_simplex_projection_moves_toward_other_corners():
    d, t0 = 3, 1
    total = d * d * t0
    g = gen_simplex(d, t0, 0)
    index = {p: v for v, p in g.meta.coords.items()}
    rows = g.rows(g.meta.corners)
    for x, v in index.items():
        if max(x) < d:
            continue
        i = max(range(d), key=lambda j: (x[j], -j))
        y = project_pi(x, i)
        assert sum(y) == total and y in index
        w = index[y]
        for j in range(d):
            if j == i:
                assert rows[j, w] > rows[j, v]
            else:
                assert rows[j, w] < rows[j, v]


@pytest.mark.parametrize("d, L", [(2, 4), (3, 3)])
def test_cube_projection_moves_toward_other_corners(d, L):
    pts = set(cut_corner_points(d, L))

    def corner_dist(x, j):
        return L + sum(x) - 2 * x[j]

    for x in pts:
        for i in range(d):
            try:
                y = project_pi(x, i, L)
            except ValueError:
                continue
            assert y in pts
            for j in range(d):
                if j == i:
                    assert corner_dist(y, j) > corner_dist(x, j)
                else:
                    assert corner_dist(y, j) < corner_dist(x, j)


def test_simplex_reply_example():
    g = gen_simplex(3, 1, 4)
    strat = SimplexStrategy(g)
    corner = g.meta.corners[0]
    reply = strat.move(Position((corner,), ()))
    assert g.meta.coords[reply] == (7, 1, 1)
    rows = g.rows(g.meta.corners)
    closer = [j for j in range(3) if rows[j, reply] < rows[j, corner]]
    assert closer == [1, 2]
    leaf = next(v for v, host in g.meta.anchor.items() if host == corner)
    assert strat.move(Position((leaf,), ())) == reply


@pytest.mark.parametrize("d, t0", [(3, 1), (3, 2)])
def test_simplex_batch_matches_scalar(d, t0):
    g = gen_simplex(d, t0, 2)
    strat = SimplexStrategy(g)
    rng = np.random.default_rng(1)
    starts = [Position((), ())]
    for _ in range(5):
        a = int(rng.integers(g.n))
        starts.append(Position((a,), (strat.move(Position((a,), ())),)))
    for pos in starts[: 1 if t0 == 1 else None]:
        free = np.array([v for v in range(g.n) if v not in pos.claimed])
        batch = strat.move_batch(pos, free)
        assert batch.tolist() == [strat.move(pos.play(int(x))) for x in free]


def test_simplex_without_lookup_table_agrees():
    g = gen_simplex(3, 1, 1)
    strat = SimplexStrategy(g)
    plain = SimplexStrategy(g)
    plain.table = None
    moves = np.arange(g.n)
    assert strat.move_batch(Position(), moves).tolist() == plain.move_batch(Position(), moves).tolist()


def test_simplex_per_round_small():
    g = gen_simplex(3, 2, 3)
    res = per_round_check(GameSpec(g, 2), SimplexStrategy(g), b_closer_to_corners(g))
    assert res.passed


def test_simplex_needs_metadata():
    with pytest.raises(StrategyError):
        SimplexStrategy(gen_path(4))


def test_gcc_interpretation():
    g = gen_grid_connected_cycles(2, L=4, N=3)
    strat = GridCyclesStrategy(g)
    for v, (lo, hi, axis, k) in g.meta.connections.items():
        assert strat.interpret(v) == lo
        assert hi[axis] == lo[axis] + 1
    for v, at in g.meta.anchor.items():
        assert strat.interpret(v) == g.meta.coords[at]
    ring = g.meta.rings[(2, 2)]
    pos = Position((ring[0],), (strat.move(Position((ring[0],), ())),))
    pos = pos.play(ring[1])
    assert strat.abstract_line(pos)[-1] is None
    assert strat.move(pos) == lowest_free(g, pos)


def test_gcc_reply_lands_on_lowest_free_ring_node():
    g = gen_grid_connected_cycles(2, L=4, N=3)
    strat = GridCyclesStrategy(g)
    a = g.meta.rings[(4, 4)][0]
    reply = strat.move(Position((a,), ()))
    target = project_pi((4, 4), 0, 4)
    assert reply == g.meta.rings[target][0]


@pytest.mark.parametrize("L, N", [(2, 10), (4, 20)])
def test_gcc_one_round_guarantees(L, N):
    d = 2
    g = gen_grid_connected_cycles(d, 1, N, L=L)
    strat = GridCyclesStrategy(g)
    tails = list(g.meta.anchor)
    res = exploit(GameSpec(g, 1), strat, Player.B, counted=tails)
    assert Fraction(res.guaranteed_value.half_units, 2) >= (1 - Fraction(1, d)) * len(tails)
    cd = g.rows(g.meta.attachments).T

    def a_owns_or_ties_few(gr, pos, r):
        da = cd[list(pos.a)].min(axis=0)
        db = cd[list(pos.b)].min(axis=0)
        return int((da <= db).sum()) <= 2 * r

    assert per_round_check(GameSpec(g, 1), strat, a_owns_or_ties_few).passed


def test_best_neighbor_examples():
    star = gen_star(4)
    res = exploit(GameSpec(star, 1), BestNeighborStrategy(star), Player.B)
    assert res.guaranteed_value.half_units == 2
    nine = gen_nine_vertex()
    pos = replay(GameSpec(nine, 1), BestNeighborStrategy(nine), Player.B, [0])
    assert partition(nine, pos).score.b_half_units == 8
    assert partition(nine, Position((0,), (3,))).score.b_half_units == 10


def _best_neighbor_bound_holds(g):
    res = exploit(GameSpec(g, 1), BestNeighborStrategy(g), Player.B)
    return g.max_degree * res.guaranteed_value.half_units >= 2 * (g.n - 1)


def test_best_neighbor_bound_on_small_connected_graphs():
    for n in range(2, 7):
        for g in enumerate_connected(n):
            assert _best_neighbor_bound_holds(g)


def test_best_neighbor_bound_on_random_graphs():
    rng = np.random.default_rng(11)
    for _ in range(40):
        g = random_bounded_degree(int(rng.integers(4, 10)), rng)
        assert _best_neighbor_bound_holds(g)


def test_hub_mirror_opening_and_answers():
    g = gen_delta_copies(2, gen_nine_vertex())
    strat = HubMirrorStrategy(g)
    assert strat.move(Position()) == g.meta.hub
    for b in range(1, g.n):
        pos = Position((g.meta.hub,), (b,))
        reply = strat.move(pos)
        assert g.meta.copy_of[reply] == g.meta.copy_of[b]


def test_hub_mirror_last_move_stays_in_its_copy():
    # with the hub taken by A, B's final pebble can only change owners inside its own copy
    g = gen_delta_copies(2, gen_nine_vertex())
    strat = HubMirrorStrategy(g)
    for b1 in range(1, g.n):
        start = Position((g.meta.hub,), (b1,))
        start = start.play(strat.move(start))
        before = partition(g, start).owner
        for b2 in range(g.n):
            if b2 in start.claimed:
                continue
            after = partition(g, start.play(b2)).owner
            home = g.meta.copy_of[b2]
            outside = [v for v in range(g.n) if g.meta.copy_of.get(v) != home]
            assert [after[v] for v in outside] == [before[v] for v in outside]


def test_hub_mirror_single_copy():
    g = gen_delta_copies(1, gen_path(4))
    res = exploit(GameSpec(g, 2), HubMirrorStrategy(g), Player.A)
    assert res.guaranteed_value.half_units > 0


def test_corner_predicate_batch_matches_scalar():
    g = gen_simplex(3, 1, 2)
    pred = b_closer_to_corners(g)
    strat = SimplexStrategy(g)
    pos = Position()
    a = np.arange(g.n)
    b = strat.move_batch(pos, a)
    batch = pred.batch(g, pos, a, b, 1)
    scalar = [pred(g, Position((int(x),), (int(y),)), 1) for x, y in zip(a, b)]
    assert batch.tolist() == scalar


def test_registry():
    assert {"central", "two-round", "leg-defense", "simplex-b", "gcc-b", "best-neighbor-b", "hub-mirror-a"} <= set(REGISTRY)
    g = gen_star(3)
    assert make_strategy("central", g).move(Position()) == 0
    assert strategy_holder("leg-defense") is Player.B
    with pytest.raises(StrategyError):
        make_strategy("nope", g)
