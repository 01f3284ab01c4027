import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bfs, half_units
from test_graph import connected_graphs
from voronoi_game.families import gen_nine_vertex, gen_path, gen_star
from voronoi_game.voronoi import Owner, Player, Position, PositionError, Score, dominance_region, partition, score


def test_path_middle_tied():
    part = partition(gen_path(3), Position((0,), (2,)))
    assert part.owner[1] is Owner.TIED
    assert part.score.half_units == 3


def test_star_center_vs_leaf():
    s = score(gen_star(4), Position((0,), (1,)))
    assert s.half_units == 8 and str(s.ratio) == "4/5"


def test_nine_vertex_best_reply_gets_five():
    g = gen_nine_vertex()
    pos = Position((0,), ())
    best = min(score(g, pos.play(x)).half_units for x in range(1, g.n))
    assert 2 * g.n - best == 10


def test_empty_side_rejected():
    with pytest.raises(PositionError):
        partition(gen_path(3), Position((0,), ()))


@pytest.mark.parametrize("a, b", [((0, 1), ()), ((0,), (0,)), ((), (1,))])
def test_position_invariants(a, b):
    with pytest.raises(PositionError):
        Position(a, b)


def test_position_moves_and_play():
    pos = Position.from_moves([3, 1, 4])
    assert pos.a == (3, 4) and pos.b == (1,)
    assert pos.to_move is Player.B and pos.moves() == (3, 1, 4)
    with pytest.raises(PositionError):
        pos.play(1)


def test_score_bounds():
    with pytest.raises(ValueError):
        Score(11, 5)
    assert Score(3, 5).flipped() == Score(7, 5)


def test_dominance_region_examples():
    assert dominance_region(gen_path(3), 2, 0) == {2}
    assert dominance_region(gen_star(4), 2, 0) == {2}


def test_nine_vertex_dominance_of_cycle_neighbour():
    # vertex 0 has degree 3; its cycle neighbours 1 and 5 each dominate four vertices
    g = gen_nine_vertex()
    assert g.degree(0) == 3
    assert len(dominance_region(g, 1, 0)) == 4
    assert len(dominance_region(g, 5, 0)) == 4


@st.composite
def graph_and_claims(draw):
    g = draw(connected_graphs(max_n=10).filter(lambda g: g.n >= 2))
    order = draw(st.permutations(range(g.n)))
    k = draw(st.integers(1, g.n // 2))
    a = tuple(order[:k])
    b = tuple(order[k : k + draw(st.integers(1, g.n - k))])
    return g, a, b


@settings(max_examples=80, deadline=None)
@given(graph_and_claims())
def test_partition_matches_definition(data):
    g, a, b = data
    pos = object.__new__(Position)
    object.__setattr__(pos, "a", a)
    object.__setattr__(pos, "b", b)
    res = partition(g, pos)
    assert res.score.half_units == half_units(g, a, b)
    a_half = sum(2 if o is Owner.A else 1 if o is Owner.TIED else 0 for o in res.owner)
    b_half = sum(2 if o is Owner.B else 1 if o is Owner.TIED else 0 for o in res.owner)
    assert a_half == res.score.half_units and a_half + b_half == 2 * g.n
    for v in a:
        assert res.owner[v] is Owner.A
    assert partition(g, pos.swapped()).score.half_units == 2 * g.n - res.score.half_units


@settings(max_examples=60, deadline=None)
@given(graph_and_claims(), st.data())
def test_monotone_in_a_claims(data, more):
    g, a, b = data
    free = [v for v in range(g.n) if v not in a and v not in b]
    if not free:
        return
    extra = more.draw(st.sampled_from(free))
    assert half_units(g, a + (extra,), b) >= half_units(g, a, b)


@settings(max_examples=60, deadline=None)
@given(connected_graphs(max_n=10).filter(lambda g: g.n >= 2), st.data())
def test_neighbour_regions_cover(g, data):
    v = data.draw(st.integers(0, g.n - 1))
    covered = set().union(*(dominance_region(g, x, v) for x in g.neighbors(v)))
    assert covered == set(range(g.n)) - {v}
