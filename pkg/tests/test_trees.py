from fractions import Fraction

import numpy as np
import pytest

from oracles import brute_threshold_vertices, certificate_holds, edge_sides
from voronoi_game.enumerate import enumerate_trees, random_tree
from voronoi_game.families import broom_vertices, gen_broom_leg_tree, gen_nine_vertex, gen_path, gen_star
from voronoi_game.solver import GameSpec, exploit, replay
from voronoi_game.strategy import StrategyError
from voronoi_game.trees import (
    CentralStrategy,
    LegDefenseStrategy,
    NotATreeError,
    TwoRoundStrategy,
    find_threshold,
    is_threshold_vertex,
    threshold_vertices,
    tree_path,
    weight_and_orient,
)
from voronoi_game.voronoi import Player


def small_trees(max_n=10):
    for n in range(2, max_n + 1):
        yield from enumerate_trees(n)


def test_path_roots():
    wo = weight_and_orient(gen_path(4))
    assert wo.central_edge == (1, 2) and wo.edge_weight(1, 2) == 2
    assert weight_and_orient(gen_path(5)).central_vertex == 2


def test_star_orientation():
    wo = weight_and_orient(gen_star(5))
    assert wo.central_vertex == 0
    assert set(wo.weight.values()) == {1}


def test_not_a_tree():
    with pytest.raises(NotATreeError):
        weight_and_orient(gen_nine_vertex())
    with pytest.raises(NotATreeError):
        find_threshold(gen_nine_vertex())


def test_orientation_matches_component_counts():
    for g in small_trees():
        wo = weight_and_orient(g)
        outs = [0] * g.n
        for u, v in g.edges():
            su, sv = edge_sides(g, u, v)
            assert wo.edge_weight(u, v) == min(su, sv)
            if su < sv:
                assert wo.out[u] == v
            elif sv < su:
                assert wo.out[v] == u
        for v in range(g.n):
            outs[v] = wo.out[v] is not None
        assert len(wo.roots) in (1, 2)
        if len(wo.roots) == 2:
            assert wo.roots[1] in g.neighbors(wo.roots[0])


def test_weights_increase_towards_root():
    for g in small_trees(9):
        wo = weight_and_orient(g)
        for v in range(g.n):
            head = wo.out[v]
            if head is not None and wo.out[head] is not None:
                assert wo.edge_weight(v, head) < wo.edge_weight(head, wo.out[head])


def test_p9_pair():
    res = find_threshold(gen_path(9))
    assert (res.kind, res.u, res.v, res.size_u, res.size_v) == ("pair", 3, 5, 4, 4)


def test_star_single():
    res = find_threshold(gen_star(6))
    assert res.is_single and res.u == 0


def test_threshold_walk_matches_definition():
    for g in small_trees():
        wo = weight_and_orient(g)
        found = threshold_vertices(g, wo)
        assert found == brute_threshold_vertices(g)
        assert all(is_threshold_vertex(g, wo, x) for x in found)
        assert 1 <= len(found) <= 2


def test_certificates_on_random_trees():
    rng = np.random.default_rng(5)
    for _ in range(200):
        g = random_tree(int(rng.integers(2, 60)), rng)
        res = find_threshold(g)
        path = None if res.is_single else tree_path(g, res.u, res.v)
        assert certificate_holds(g, res, path)


def test_central_strategy_guarantees_half():
    for g in small_trees(9):
        res = exploit(GameSpec(g, 1), CentralStrategy(g), Player.A)
        assert res.ratio >= Fraction(1, 2)
    for n in (2, 4, 6, 8):
        g = gen_path(n)
        assert exploit(GameSpec(g, 1), CentralStrategy(g), Player.A).ratio == Fraction(1, 2)


@pytest.mark.parametrize("k", [3, 4, 6, 8])
def test_two_round_on_stars(k):
    g = gen_star(k)
    strat = TwoRoundStrategy(g)
    assert strat.first == 0
    assert exploit(GameSpec(g, 2), strat, Player.A).ratio == 1 - Fraction(2, k + 1)


def test_two_round_beats_a_third_on_small_trees():
    for g in small_trees(9):
        if g.n >= 4:
            assert exploit(GameSpec(g, 2), TwoRoundStrategy(g), Player.A).ratio > Fraction(1, 3)


def test_two_round_on_broom_tree_is_capped_by_leg_defense():
    k, N, t = 4, 10, 2
    g = gen_broom_leg_tree(k, N)
    spec = GameSpec(g, t)
    a = exploit(spec, TwoRoundStrategy(g), Player.A).ratio
    b = exploit(spec, LegDefenseStrategy(g), Player.B).ratio
    assert Fraction(1, 3) < a <= 1 - b <= 1 - Fraction(2 * k * N - t * N, g.n)


def test_leg_defense_opening_at_centre():
    g = gen_broom_leg_tree(3, 2)
    meta = g.meta
    spec = GameSpec(g, 2)
    strat = LegDefenseStrategy(g)
    top = meta.legs[0].path[0]
    pos = replay(spec, strat, Player.B, [meta.center, top])
    assert pos.b[0] == meta.head
    assert pos.b[1] == meta.legs[1].path[0]


def test_leg_defense_keeps_head_when_untouched():
    k, N = 3, 2
    g = gen_broom_leg_tree(k, N)
    meta = g.meta
    pos = replay(GameSpec(g, 2), LegDefenseStrategy(g), Player.B, [meta.legs[0].path[2], meta.legs[0].path[5]])
    assert pos.b[0] == meta.center
    from voronoi_game.voronoi import Owner, partition

    owner = partition(g, pos).owner
    assert all(owner[x] is Owner.B for x in meta.head_leaves)


@pytest.mark.parametrize("k, N, t", [(2, 3, 2), (3, 3, 2), (2, 3, 3), (3, 2, 3)])
def test_leg_defense_broom_guarantee_small(k, N, t):
    g = gen_broom_leg_tree(k, N)
    res = exploit(GameSpec(g, t), LegDefenseStrategy(g), Player.B, counted=broom_vertices(g))
    assert res.guaranteed_value.half_units >= 2 * (2 * k * N - t * N)


def test_leg_defense_needs_metadata():
    with pytest.raises(StrategyError):
        LegDefenseStrategy(gen_path(5))


def test_serialization():
    d = weight_and_orient(gen_path(4)).to_dict()
    assert d["roots"] == [1, 2]
    assert {"edge": [1, 2], "weight": 2, "direction": None} in d["edges"]
    assert find_threshold(gen_path(9)).to_dict()["kind"] == "pair"


def test_bare_plan_stalls_at_a_third_on_p6():
    # A holds both threshold vertices, yet B's two pebbles each take a component of n/3
    g = gen_path(6)
    bare = exploit(GameSpec(g, 2), TwoRoundStrategy(g, safeguard=False), Player.A)
    assert bare.ratio == Fraction(1, 3)
    assert exploit(GameSpec(g, 2), TwoRoundStrategy(g), Player.A).ratio > Fraction(1, 3)


def test_safeguard_keeps_planned_opening_when_it_suffices():
    g = gen_broom_leg_tree(3, 5)
    strat = TwoRoundStrategy(g)
    assert strat.first == strat.planned_first
