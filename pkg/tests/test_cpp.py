"""Single-walk solver: joins, duplication, Euler tours."""

from __future__ import annotations

import pytest

from kpostman.cpp import (
    Multiplicities,
    euler_tour,
    min_weight_join,
    odd_vertices,
    solve_cpp,
)
from kpostman.graph import GraphError, MultiGraph, Solution, verify_solution

from conftest import (
    cpp_enumeration_minimum,
    join_enumeration_minimum,
    named_graph,
    random_small_graphs,
)


def test_odd_vertices():
    assert odd_vertices(named_graph("triangle")) == frozenset()
    assert odd_vertices(named_graph("single")) == {1, 2}
    assert odd_vertices(named_graph("k4")) == {1, 2, 3, 4}


def test_odd_vertices_even_cardinality():
    for g in random_small_graphs(seed=3, trials=30):
        assert len(odd_vertices(g)) % 2 == 0


def test_join_triangle_empty():
    assert min_weight_join(named_graph("triangle"), frozenset()) == frozenset()


def test_join_single_edge():
    g = named_graph("single")
    assert min_weight_join(g, {1, 2}) == {1}


def test_join_k4_matches_brute_force():
    g = named_graph("k4")
    t = frozenset((1, 2, 3, 4))
    expected = join_enumeration_minimum(g, t)  # == 2, a perfect matching
    assert expected == 2
    join = min_weight_join(g, t)
    assert sum(g.edge(e).weight for e in join) == expected


def test_join_weight_equals_brute_force_on_random_graphs():
    for g in random_small_graphs(seed=11, trials=40, max_m=6):
        t = odd_vertices(g)
        join = min_weight_join(g, t)
        got = sum(g.edge(e).weight for e in join)
        assert got == join_enumeration_minimum(g, t)


def test_join_parity_flips_exactly_t():
    for g in random_small_graphs(seed=12, trials=40):
        t = odd_vertices(g)
        join = min_weight_join(g, t)
        for v in g.vertices():
            flips = sum(1 for e in g.adjacency[v] if e.id in join)
            assert (flips % 2 == 1) == (v in t)


def test_join_rejects_odd_t():
    with pytest.raises(GraphError):
        min_weight_join(named_graph("triangle"), {1})


def test_join_rejects_disconnected():
    g = MultiGraph.from_edges(4, [(1, 2, 1), (3, 4, 1)])
    with pytest.raises(GraphError):
        min_weight_join(g, {1, 2})


@pytest.mark.parametrize(
    "name,expected",
    [("triangle", 3), ("k4", 8), ("star3", 6), ("single", 2), ("bowtie", 6)],
)
def test_solve_cpp_known_values(name, expected):
    g = named_graph(name)
    assert cpp_enumeration_minimum(g) == expected
    res = solve_cpp(g)
    assert res.weight == expected
    assert res.multiplicities.weight() == expected


def test_solve_cpp_triangle_join_empty():
    assert solve_cpp(named_graph("triangle")).join == frozenset()


def test_solve_cpp_star_doubles_everything():
    res = solve_cpp(named_graph("star3"))
    assert res.join == {1, 2, 3}


def test_solve_cpp_matches_enumeration():
    for g in random_small_graphs(seed=21, trials=60, max_n=6, max_m=8):
        assert solve_cpp(g).weight == cpp_enumeration_minimum(g)


def test_solve_cpp_duplicated_graph_is_eulerian():
    for g in random_small_graphs(seed=22, trials=30):
        m = solve_cpp(g).multiplicities
        assert m.all_degrees_even()
        walk = euler_tour(m, min(v for v in g.vertices() if g.degree(v) > 0))
        verify_solution(g, 1, Solution((walk,), m.weight()))


def test_solve_cpp_rejects_disconnected():
    g = MultiGraph.from_edges(4, [(1, 2, 1), (3, 4, 1)])
    with pytest.raises(GraphError):
        solve_cpp(g)


def test_euler_tour_triangle():
    m = Multiplicities.uniform(named_graph("triangle"))
    walk = euler_tour(m, 1)
    assert len(walk) == 3
    assert walk.steps[0][0] == 1


def test_euler_tour_doubled_edge():
    m = Multiplicities(named_graph("single"), {1: 2})
    walk = euler_tour(m, 1)
    assert walk.steps == ((1, 1), (2, 1))


def test_euler_tour_bowtie_from_center():
    g = named_graph("bowtie")
    walk = euler_tour(Multiplicities.uniform(g), 3)
    assert len(walk) == 6
    verify_solution(g, 1, Solution((walk,), 6))


def test_euler_tour_deterministic_lowest_edge_first():
    g = named_graph("bowtie")
    w1 = euler_tour(Multiplicities.uniform(g), 3)
    w2 = euler_tour(Multiplicities.uniform(g), 3)
    assert w1 == w2
    # first departure from vertex 3 takes the lowest-id incident edge
    assert w1.steps[0][1] == min(e.id for e in g.adjacency[3])


def test_euler_tour_rejects_odd_degree():
    with pytest.raises(GraphError):
        euler_tour(Multiplicities.uniform(named_graph("single")), 1)


def test_euler_tour_rejects_disconnected_support():
    g = MultiGraph.from_edges(4, [(1, 2, 1), (3, 4, 1)])
    m = Multiplicities(g, {1: 2, 2: 2})
    with pytest.raises(GraphError):
        euler_tour(m, 1)


def test_euler_tour_rejects_start_outside_component():
    g = named_graph("triangle")
    m = Multiplicities(g, {1: 2})
    with pytest.raises(GraphError):
        euler_tour(m, 3)
