"""Windows, distances and components on finite and lazy graphs."""
import itertools
import math

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from endscope.errors import ConfigError, NotExploredError
from endscope.gallery import make
from endscope.graph import (
    Certainty,
    FiniteGraph,
    Openness,
    UnionFind,
    all_pairs_distances,
    ball,
    components_of_complement,
    distance,
    explore,
    set_diameter,
)

from conftest import window


def test_path_window_is_complete_and_exact():
    g = FiniteGraph.path(6, root=3)
    w = explore(g, 10)
    assert not w.frontier
    assert len(w) == 7
    assert distance(w, 0, 6, use_exact_metric=False).value == 6
    assert distance(w, 0, 6, use_exact_metric=False).certainty is Certainty.EXACT


def test_window_radius_truncates_and_marks_frontier():
    w = explore(FiniteGraph.path(10), 3)
    assert sorted(w.adjacency) == [0, 1, 2, 3]
    assert w.frontier == frozenset({3})
    assert w.layer[3] == 3


def test_distance_is_upper_bound_when_frontier_is_close():
    # cycle of 8: from 0, 4 lies at distance 4; radius 3 cannot see the short side yet
    g = FiniteGraph.cycle(8)
    w = explore(g, 3)
    est = distance(w, 3, 5, use_exact_metric=False)
    assert est.value == 6
    assert est.certainty is Certainty.UPPER_BOUND


def test_star_hub_budget():
    g = make("star-paths").graph
    w = explore(g, 2, budget=5)
    assert w.status["x"].enumerated == 5
    assert not w.is_complete("x")
    assert (5, 1) in w and (6, 1) not in w


def test_max_vertices_caps_window():
    w = explore(make("free:r=1").graph, 6, max_vertices=50)
    assert len(w) == 50
    assert w.capped


def test_require_raises():
    w = explore(FiniteGraph.path(4), 1)
    with pytest.raises(NotExploredError):
        w.require(4)


def test_negative_radius():
    with pytest.raises(ConfigError):
        explore(FiniteGraph.path(2), -1)


def test_bad_budget():
    with pytest.raises(ConfigError):
        explore(FiniteGraph.path(2), 1, budget="lots")


def test_loop_rejected():
    with pytest.raises(ConfigError):
        FiniteGraph({0: [0]}, 0)


def test_components_open_and_closed():
    # path 0-1-2-3-4 seen to radius 3 from 0: removing 1 leaves {0} closed and {2,3} open
    w = explore(FiniteGraph.path(4), 3)
    lab = components_of_complement(w, {1})
    assert lab.openness[lab.component_of(0)] is Openness.CLOSED
    assert lab.openness[lab.component_of(2)] is Openness.OPEN
    assert lab.members[lab.component_of(3)] == frozenset({2, 3})


def test_ball_exact_metric_and_bfs_agree_on_ladder():
    w = window("ladder", 6)
    members, complete = ball(w, (0, "t"), 2)
    assert complete
    assert members == frozenset(w.bfs([(0, "t")], limit=2))


def test_set_diameter_empty_and_single():
    w = window("line", 3)
    assert set_diameter(w, []).value == 0
    assert set_diameter(w, [2]).value == 0
    assert set_diameter(w, [-3, 3]).value == 6


def test_scipy_matrix_matches_networkx():
    # two independent shortest-path routes on the same window
    w = window("free:r=1", 3)
    order, mat = all_pairs_distances(w)
    g = nx.Graph((u, v) for u, ws in w.adjacency.items() for v in ws)
    ref = dict(nx.all_pairs_shortest_path_length(g))
    for i, u in enumerate(order):
        for j, v in enumerate(order):
            assert mat[i, j] == ref[u][v]


def test_union_find():
    uf = UnionFind()
    uf.union(1, 2)
    uf.union(3, 4)
    uf.union(2, 4)
    assert uf.find(1) == uf.find(3)
    assert uf.find(5) == 5


@st.composite
def finite_graphs(draw):
    n = draw(st.integers(2, 12))
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=30))
    adj = {i: [i + 1] for i in range(n - 1)} | {n - 1: []}  # keep it connected
    for a, b in edges:
        if a != b:
            adj[a].append(b)
    return FiniteGraph(adj, 0)


@settings(max_examples=200, deadline=None)
@given(finite_graphs(), st.integers(0, 6))
def test_window_monotone_in_radius(g, r):
    small, big = explore(g, r), explore(g, r + 1)
    assert set(small.adjacency) <= set(big.adjacency)
    for v, ws in small.adjacency.items():
        assert ws <= big.adjacency[v]
        if small.is_complete(v):
            assert big.is_complete(v)


@settings(max_examples=200, deadline=None)
@given(finite_graphs())
def test_window_distances_triangle_and_exactness(g):
    w = explore(g, 20)
    ref = dict(nx.all_pairs_shortest_path_length(nx.Graph((u, v) for u, ws in w.adjacency.items() for v in ws)))
    vs = sorted(w.adjacency)
    for x, y in itertools.combinations(vs[:8], 2):
        est = distance(w, x, y, use_exact_metric=False)
        assert est.value == ref[x][y]
        assert est.certainty is Certainty.EXACT
    for x, y, z in itertools.combinations(vs[:6], 3):
        assert ref[x][z] <= ref[x][y] + ref[y][z]


@settings(max_examples=150, deadline=None)
@given(finite_graphs(), st.integers(1, 4))
def test_truncated_distance_never_underestimates(g, r):
    full = explore(g, 50)
    w = explore(g, r)
    for x, y in itertools.combinations(sorted(w.adjacency), 2):
        est = distance(w, x, y, use_exact_metric=False)
        true = distance(full, x, y, use_exact_metric=False).value
        assert est.value >= true
        if est.certainty is Certainty.EXACT:
            assert est.value == true


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(["ladder", "x1", "treeplus2:b=inf", "free:r=2", "kn-chain:variant=5d"]),
       st.data())
def test_exact_metric_triangle_inequality(spec, data):
    w = window(spec, 3, 500)
    vs = sorted(w.adjacency, key=w.token)
    x, y, z = (data.draw(st.sampled_from(vs)) for _ in range(3))
    m = w.graph.exact_metric
    assert m(x, z) <= m(x, y) + m(y, z)
    assert m(x, y) == m(y, x)
    assert (m(x, y) == 0) == (x == y)


def test_infinite_constant():
    assert make("star-paths").graph.degree_hint("x") == math.inf
