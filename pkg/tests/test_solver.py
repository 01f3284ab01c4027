from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import game_value, half_units, strategy_worst_case
from test_graph import connected_graphs
from voronoi_game.families import gen_nine_vertex, gen_path, gen_simplex, gen_star
from voronoi_game.solver import (
    BudgetExceeded,
    GameSpec,
    always_true,
    exploit,
    minimax_reference,
    per_round_check,
    replay,
    solve,
    twin_classes,
    voronoi_ratio,
)
from voronoi_game.strategies import CornerPredicate, GreedyStrategy, SimplexStrategy
from voronoi_game.strategy import Strategy, StrategyError
from voronoi_game.trees import CentralStrategy
from voronoi_game.voronoi import Player, Position, score


@pytest.mark.parametrize(
    "g, t, expected",
    [
        (gen_star(4), 1, Fraction(4, 5)),
        (gen_path(2), 1, Fraction(1, 2)),
        (gen_path(5), 1, Fraction(3, 5)),
        (gen_nine_vertex(), 1, Fraction(4, 9)),
    ],
)
def test_known_values(g, t, expected):
    assert voronoi_ratio(g, t) == expected


def test_too_many_rounds():
    with pytest.raises(ValueError):
        GameSpec(gen_path(3), 2)
    with pytest.raises(ValueError):
        GameSpec(gen_path(3), 0)


def test_budget_is_an_error():
    with pytest.raises(BudgetExceeded):
        solve(GameSpec(gen_path(12), 3), budget_nodes=10)


def test_result_serialization():
    d = solve(GameSpec(gen_star(4), 1)).to_dict()
    assert d["value"] == {"half_units": 8, "n": 5}
    assert d["ratio"] == "4/5"
    assert d["principal_variation"] == [0, 1]


def test_deterministic_pv_prefers_low_ids():
    a = solve(GameSpec(gen_path(6), 2))
    b = solve(GameSpec(gen_path(6), 2))
    assert a == b


def test_twin_classes_on_star():
    classes = twin_classes(gen_star(4))
    assert [1, 2, 3, 4] in classes


@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_n=7).filter(lambda g: g.n >= 2), st.integers(1, 2))
def test_solver_variants_agree_with_oracle(g, t):
    if 2 * t > g.n:
        return
    spec = GameSpec(g, t)
    want = game_value(g, t)
    for memo in (True, False):
        for prune in (True, False):
            for twins in (True, False):
                res = solve(spec, memo=memo, prune=prune, reduce_twins=twins)
                assert res.value.half_units == want
    res = solve(spec)
    assert minimax_reference(g, t).half_units == want
    assert len(res.principal_variation) == 2 * t
    assert score(g, Position.from_moves(res.principal_variation)).half_units == want


@settings(max_examples=30, deadline=None)
@given(connected_graphs(max_n=8).filter(lambda g: g.n >= 2))
def test_fixed_strategy_cannot_beat_optimal(g):
    spec = GameSpec(g, 1)
    value = solve(spec).value.half_units
    a = exploit(spec, GreedyStrategy(g, Player.A), Player.A)
    b = exploit(spec, GreedyStrategy(g, Player.B), Player.B)
    assert a.guaranteed_value.half_units <= value
    assert 2 * g.n - b.guaranteed_value.half_units >= value


@settings(max_examples=25, deadline=None)
@given(connected_graphs(max_n=7).filter(lambda g: g.n >= 4), st.sampled_from([Player.A, Player.B]))
def test_exploit_matches_brute_force_and_replays(g, holder):
    spec = GameSpec(g, 2)
    strat = GreedyStrategy(g, holder)
    res = exploit(spec, strat, holder)
    assert res.guaranteed_value.half_units == strategy_worst_case(g, 2, strat, holder)
    pos = replay(spec, strat, holder, res.witness_line)
    a = half_units(g, pos.a, pos.b)
    assert res.guaranteed_value.half_units == (a if holder is Player.A else 2 * g.n - a)
    assert pos.moves() == res.line


def test_exploit_central_examples():
    assert exploit(GameSpec(gen_star(4), 1), CentralStrategy(gen_star(4)), "A").ratio == Fraction(4, 5)
    assert exploit(GameSpec(gen_path(5), 1), CentralStrategy(gen_path(5)), "A").ratio == Fraction(3, 5)


class Cheater(Strategy):
    name = "cheater"
    holder = Player.B

    def move(self, pos):
        return pos.a[0]


def test_illegal_strategy_move_is_reported():
    g = gen_path(4)
    with pytest.raises(StrategyError, match="illegal vertex"):
        exploit(GameSpec(g, 1), Cheater(g), Player.B)
    with pytest.raises(StrategyError):
        exploit(GameSpec(g, 2), Cheater(g), Player.B)


def test_exploit_counted_subset():
    g = gen_star(4)
    res = exploit(GameSpec(g, 1), CentralStrategy(g), Player.A, counted=[1, 2, 3, 4])
    assert res.guaranteed_value.n == 4 and res.guaranteed_value.half_units == 6


def test_per_round_trivial_predicate_passes():
    g = gen_path(6)
    assert per_round_check(GameSpec(g, 2), GreedyStrategy(g, Player.B), always_true).passed


def test_per_round_a_owns_no_corner_fails():
    g = gen_simplex(3, 1, 2)
    pred = CornerPredicate(g, g.meta.corners, "A", lambda count, r: count == 0, "A owns no corner")
    res = per_round_check(GameSpec(g, 1), SimplexStrategy(g), pred)
    assert not res.passed and res.failed_round == 1
    pos = Position.from_moves(res.witness_line)
    assert not pred(g, pos, 1)


def test_per_round_batch_and_scalar_agree():
    g = gen_simplex(3, 1, 2)
    pred = CornerPredicate(g, g.meta.corners, "A", lambda count, r: count == 0)

    def scalar(gr, pos, r):
        return pred(gr, pos, r)

    a = per_round_check(GameSpec(g, 1), SimplexStrategy(g), pred)
    b = per_round_check(GameSpec(g, 1), SimplexStrategy(g), scalar)
    assert (a.passed, a.witness_line) == (b.passed, b.witness_line)
