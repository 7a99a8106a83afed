import math

import networkx as nx
import numpy as np
import pytest
from conftest import graphs, path_graph
from hypothesis import given
from hypothesis import strategies as st
from oracles import bellman_ford, bfs, enumerate_hop_paths

from hopspan.graph import (
    INF,
    AugmentedGraph,
    Graph,
    all_pairs_distances,
    bounded_distances,
    canonical_search,
    dijkstra,
    format_edge_list,
    hop_bounded_distance,
    hop_bounded_path,
    multi_source_dijkstra,
    parse_edge_list,
    random_graph,
    shortest_path_edges,
    shortest_path_vertices,
)


# --- Graph invariants -------------------------------------------------------


def test_graph_normalizes_and_sorts_edges():
    g = Graph(3, [(2, 1, 4), (0, 1, 1)])
    assert g.edges == ((0, 1, 1), (1, 2, 4))
    assert g.weight(2, 1) == 4 and g.has_edge(1, 2)
    assert [v for v, _ in g.adj[1]] == [0, 2]


@pytest.mark.parametrize(
    "edges",
    [[(0, 0, 1)], [(0, 1, 1), (1, 0, 2)], [(0, 1, -1)], [(0, 1, math.nan)], [(0, 5, 1)]],
    ids=["self-loop", "duplicate", "negative", "nan", "out-of-range"],
)
def test_graph_rejects_bad_edges(edges):
    with pytest.raises(ValueError):
        Graph(3, edges)


def test_unweighted_flag():
    assert path_graph(4).unweighted
    assert not Graph(2, [(0, 1, 2)]).unweighted


@given(graphs())
def test_adjacency_is_symmetric(g):
    for u, v, w in g.edges:
        assert (v, w) in g.adj[u] and (u, w) in g.adj[v]


# --- dijkstra ---------------------------------------------------------------


def test_dijkstra_path_graph():
    assert dijkstra(path_graph(3), 0).dist == [0, 1, 2]


@given(graphs(min_n=1), st.data())
def test_dijkstra_source_is_zero(g, data):
    s = data.draw(st.integers(0, g.n - 1))
    row = dijkstra(g, s)
    assert row.dist[s] == 0
    for u, v, w in g.edges:
        assert row.dist[v] <= row.dist[u] + w and row.dist[u] <= row.dist[v] + w


def test_dijkstra_invalid_source():
    with pytest.raises(ValueError):
        dijkstra(path_graph(3), 3)


def test_dijkstra_matches_bellman_ford():
    g = random_graph(50, 150, 11, wmax=30)
    for s in range(0, 50, 7):
        assert dijkstra(g, s).dist == bellman_ford(g.n, g.edges, s)


def test_dijkstra_unreachable_is_inf():
    g = Graph(3, [(0, 1, 1)])
    assert dijkstra(g, 0).dist[2] == INF
    assert shortest_path_vertices(g, 0, 2) is None
    assert shortest_path_edges(g, 0, 2) is None


# --- multi-source -----------------------------------------------------------


def test_multi_source_single():
    g = path_graph(5)
    d, p = multi_source_dijkstra(g, [2])
    assert p == [2] * 5 and d == [2, 1, 0, 1, 2]


def test_multi_source_all_vertices():
    g = random_graph(20, 40, 1)
    d, p = multi_source_dijkstra(g, range(20))
    assert d == [0] * 20 and p == list(range(20))


def test_multi_source_empty_raises():
    with pytest.raises(ValueError):
        multi_source_dijkstra(path_graph(3), [])


def test_multi_source_matches_per_source_runs():
    g = random_graph(30, 70, 4, wmax=5)
    srcs = [3, 17, 25]
    rows = {s: dijkstra(g, s).dist for s in srcs}
    d, p = multi_source_dijkstra(g, srcs)
    for u in range(g.n):
        best = min(rows[s][u] for s in srcs)
        assert d[u] == best
        assert p[u] == min(s for s in srcs if rows[s][u] == best)


@given(graphs(min_n=2, max_w=3), st.data())
def test_multi_source_ties_go_to_smallest_id(g, data):
    srcs = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
    rows = {s: dijkstra(g, s).dist for s in srcs}
    d, p = multi_source_dijkstra(g, srcs)
    for u in range(g.n):
        best = min(rows[s][u] for s in srcs)
        assert d[u] == best
        if best < INF:
            assert p[u] == min(s for s in srcs if rows[s][u] == best)
        else:
            assert p[u] == -1


# --- bounded search ---------------------------------------------------------


@given(graphs(), st.data())
def test_bounded_distances_is_a_filter(g, data):
    s = data.draw(st.integers(0, g.n - 1))
    r = data.draw(st.integers(0, 30))
    full = dijkstra(g, s).dist
    assert bounded_distances(g, s, r, strict=True) == {v: d for v, d in enumerate(full) if d < r}
    assert bounded_distances(g, s, r, strict=False) == {v: d for v, d in enumerate(full) if d <= r}


# --- hop-bounded distances --------------------------------------------------


def test_hop_bounded_trivial_cases():
    ag = AugmentedGraph(path_graph(3))
    assert hop_bounded_distance(ag, 1, 1, 0) == 0
    assert hop_bounded_distance(ag, 0, 2, 1) == INF
    assert hop_bounded_distance(ag, 0, 2, 2) == 2


def test_hop_bounded_matches_enumeration_40_vertices():
    g = random_graph(40, 70, 8, wmax=9)
    rng = np.random.default_rng(0)
    extra = []
    seen = set()
    while len(extra) < 25:
        x, y = sorted(int(a) for a in rng.choice(40, 2, replace=False))
        if (x, y) not in seen:
            seen.add((x, y))
            extra.append((x, y, dijkstra(g, x).dist[y]))
    ag = AugmentedGraph(g, extra)
    for u in range(0, 40, 3):
        best = enumerate_hop_paths(40, [g.edges, extra], u, 3)
        for v in range(40):
            assert hop_bounded_distance(ag, u, v, 3) == best[v][3]


def test_min_weight_per_pair_is_used():
    g = Graph(2, [(0, 1, 5)])
    ag = AugmentedGraph(g, [(0, 1, 3)])
    assert hop_bounded_distance(ag, 0, 1, 1) == 3


@given(graphs(min_n=2), st.data())
def test_hop_bounded_monotone_and_above_distance(g, data):
    u = data.draw(st.integers(0, g.n - 1))
    v = data.draw(st.integers(0, g.n - 1))
    b1 = data.draw(st.integers(0, g.n))
    b2 = data.draw(st.integers(b1, g.n + 1))
    ag = AugmentedGraph(g)
    d = dijkstra(g, u).dist[v]
    h1, h2 = hop_bounded_distance(ag, u, v, b1), hop_bounded_distance(ag, u, v, b2)
    assert h1 >= h2 >= d


def test_hop_bounded_full_budget_equals_dijkstra_exhaustive():
    for seed in range(3):
        g = random_graph(100, 250, seed, wmax=12, connected=seed != 2)
        ag = AugmentedGraph(g)
        from hopspan.graph import hop_bounded_rows

        rows = hop_bounded_rows(ag, list(range(g.n)), [g.n - 1])[g.n - 1]
        assert np.array_equal(rows, all_pairs_distances(g))


@given(graphs(min_n=2), st.data())
def test_hop_bounded_path_is_realizable(g, data):
    u = data.draw(st.integers(0, g.n - 1))
    v = data.draw(st.integers(0, g.n - 1))
    beta = data.draw(st.integers(0, 5))
    ag = AugmentedGraph(g)
    w, path = hop_bounded_path(ag, u, v, beta)
    assert w == hop_bounded_distance(ag, u, v, beta)
    if w == INF:
        assert path is None
    else:
        assert path[0] == u and path[-1] == v and len(path) - 1 <= beta
        assert sum(g.weight(a, b) for a, b in zip(path, path[1:])) == w


# --- canonical paths --------------------------------------------------------


def test_shortest_path_edges_trivial():
    g = path_graph(3)
    assert shortest_path_edges(g, 1, 1) == []
    assert shortest_path_edges(g, 0, 1) == [(0, 1)]


def test_shortest_path_length_matches_bfs():
    g = random_graph(30, 60, 5, weighted=False)
    for u in range(30):
        ref = bfs(g.n, g.edges, u)
        for v in range(30):
            assert len(shortest_path_edges(g, u, v)) == ref[v]


@given(graphs(min_n=2, max_w=2), st.data())
def test_canonical_paths_symmetric_and_subpath_closed(g, data):
    u = data.draw(st.integers(0, g.n - 1))
    v = data.draw(st.integers(0, g.n - 1))
    p = shortest_path_vertices(g, u, v)
    if p is None:
        return
    assert shortest_path_vertices(g, v, u) == p[::-1]
    assert len(p) == len(set(p))
    dist = dijkstra(g, u).dist
    assert sum(g.weight(a, b) for a, b in zip(p, p[1:])) == dist[v]
    i = data.draw(st.integers(0, len(p) - 1))
    j = data.draw(st.integers(i, len(p) - 1))
    assert shortest_path_vertices(g, p[i], p[j]) == p[i : j + 1]


def test_canonical_search_radius_truncates():
    g = path_graph(6)
    dist, parent = canonical_search(g, 0, 2)
    assert dist == {0: 0, 1: 1, 2: 2}
    assert parent[2] == 1


# --- all pairs ----------------------------------------------------------------


@given(graphs(min_n=1, max_w=4))
def test_all_pairs_matches_networkx(g):
    ng = nx.Graph()
    ng.add_nodes_from(range(g.n))
    ng.add_weighted_edges_from(g.edges)
    ref = dict(nx.all_pairs_dijkstra_path_length(ng))
    d = all_pairs_distances(g)
    for u in range(g.n):
        for v in range(g.n):
            assert d[u, v] == ref[u].get(v, INF)


def test_all_pairs_zero_weight_edges():
    g = Graph(3, [(0, 1, 0), (1, 2, 2)])
    assert all_pairs_distances(g).tolist() == [[0, 0, 2], [0, 0, 2], [2, 2, 0]]


# --- edge lists ---------------------------------------------------------------


@given(graphs(min_n=1))
def test_edge_list_round_trip(g):
    assert parse_edge_list(format_edge_list(g)) == g


def test_parse_edge_list_comments_and_defaults():
    g = parse_edge_list("# hello\n0 1\n1 2 3.5  # trailing\n\n")
    assert g.n == 3 and g.edges == ((0, 1, 1), (1, 2, 3.5))


def test_parse_edge_list_errors():
    with pytest.raises(ValueError):
        parse_edge_list("0 1 2 3\n")
    with pytest.raises(ValueError):
        parse_edge_list("0 0\n")


def test_isolated_vertices_survive_round_trip():
    g = Graph(5, [(0, 1, 1)])
    assert parse_edge_list(format_edge_list(g)).n == 5


# --- random instances -------------------------------------------------------


def test_random_graph_deterministic_and_connected():
    a = random_graph(100, 400, 3)
    assert a == random_graph(100, 400, 3)
    assert a != random_graph(100, 400, 4)
    assert a.m == 400
    assert all(d < INF for d in dijkstra(a, 0).dist)


def test_random_graph_rejects_impossible():
    with pytest.raises(ValueError):
        random_graph(4, 7, 0)
    with pytest.raises(ValueError):
        random_graph(10, 5, 0)
