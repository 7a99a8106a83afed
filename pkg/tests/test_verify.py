import csv
import io
import json
import math

import numpy as np
import pytest
from conftest import complete_graph, graphs, path_graph
from hypothesis import given
from hypothesis import strategies as st
from oracles import floyd_warshall

from hopspan.core import LevelAssignment, compute_pivots
from hopspan.graph import AugmentedGraph, Graph, hop_bounded_distance, random_graph
from hopspan.hopset import HopsetEdgeSet, build_hopset
from hopspan.schedule import ParamSchedule
from hopspan.spanner import SpannerEdgeSet, build_spanner_half
from hopspan.verify import NOT_APPLICABLE, measure_min_hopbound, trace_jump_path, trace_low_level_shortcut, verify_hopset, verify_spanner


def _empty(n):
    return HopsetEdgeSet(n, (), ())


# --- verify_hopset / verify_spanner -------------------------------------------


def test_empty_hopset_full_budget_has_stretch_one():
    g = random_graph(40, 100, 0)
    rep = verify_hopset(g, _empty(40), 1, g.n - 1)
    assert rep.passed and rep.max_stretch == 1.0 and rep.pairs_checked == 40 * 39 // 2


def test_empty_hopset_short_budget_fails_with_worst_pair():
    g = path_graph(10)
    rep = verify_hopset(g, _empty(10), 3, 2)
    assert not rep.passed and rep.max_stretch == math.inf
    # ties on an infinite ratio go to the first pair in scan order
    assert rep.worst_pair == (0, 3) and rep.violations == 28


def test_verify_hopset_rejects_zero_budget():
    with pytest.raises(ValueError):
        verify_hopset(path_graph(3), _empty(3), 1, 0)


def test_verify_hopset_detects_underweight_edges():
    g = path_graph(5)
    h = HopsetEdgeSet(5, ((0, 4, 1),), (frozenset(),))
    rep = verify_hopset(g, h, 10, 4)
    assert not rep.passed and rep.lower_bound_violations >= 1


def test_verify_hopset_skips_disconnected_pairs():
    g = Graph(4, [(0, 1, 1), (2, 3, 1)])
    rep = verify_hopset(g, _empty(4), 1, 1)
    assert rep.passed and rep.pairs_checked == 2 and rep.pairs_skipped == 4


def test_spanner_equal_to_graph():
    g = random_graph(30, 80, 1, weighted=False)
    rep = verify_spanner(g, g, 1, 0)
    assert rep.passed and rep.max_stretch == 1.0


def test_spanner_must_be_subgraph():
    g = path_graph(4)
    bad = SpannerEdgeSet(4, ((0, 2),), (frozenset(),))
    with pytest.raises(ValueError):
        verify_spanner(g, bad, 3, 0)


def test_spanner_tree_of_cycle():
    n = 8
    g = Graph(n, [(i, (i + 1) % n, 1) for i in range(n)])
    s = SpannerEdgeSet(n, tuple((i, i + 1) for i in range(n - 1)), tuple(frozenset() for _ in range(n - 1)))
    assert verify_spanner(g, s, 1, 6).passed
    rep = verify_spanner(g, s, 1, 5)
    assert not rep.passed and rep.worst_pair == (0, 7) and rep.worst_excess == 1


@given(graphs(min_n=2, max_n=14, max_w=5), st.integers(1, 6))
def test_verify_hopset_agrees_with_definition(g, beta):
    h = build_hopset(g, ParamSchedule.make(4, "identity"), seed=0)
    d = floyd_warshall(g.n, g.edges)
    ag = AugmentedGraph(g, h.edges)
    worst = 1.0
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if d[u][v] < math.inf:
                worst = max(worst, hop_bounded_distance(ag, u, v, beta) / d[u][v])
    rep = verify_hopset(g, h, 3, beta)
    assert rep.max_stretch == pytest.approx(worst)
    assert rep.passed == (worst <= 3)


# --- measure_min_hopbound -------------------------------------------------------


def test_min_hopbound_examples():
    assert measure_min_hopbound(complete_graph(6), _empty(6), math.inf) == 1
    assert measure_min_hopbound(path_graph(9), _empty(9), 1) == 8
    assert measure_min_hopbound(path_graph(9), _empty(9), 2) == 8
    with pytest.raises(ValueError):
        measure_min_hopbound(path_graph(3), _empty(3), 0.5)


def test_min_hopbound_none_when_alpha_unreachable():
    g = Graph(3, [(0, 1, 1), (1, 2, 1)])
    h = HopsetEdgeSet(3, ((0, 2, 3),), (frozenset(),))
    # the heavy shortcut never beats alpha < 1.5 on its own but the path always meets alpha >= 1
    assert measure_min_hopbound(g, h, 1) == 2


@given(graphs(min_n=2, max_n=14, max_w=5), st.sampled_from([1, 1.5, 2, 3]), st.integers(0, 20))
def test_min_hopbound_is_tight(g, alpha, seed):
    h = build_hopset(g, ParamSchedule.make(4, "identity"), seed=seed)
    beta = measure_min_hopbound(g, h, alpha)
    assert beta is not None
    assert verify_hopset(g, h, alpha, beta).passed
    if beta > 1:
        assert not verify_hopset(g, h, alpha, beta - 1).passed


@given(graphs(min_n=2, max_n=12, max_w=5), st.integers(0, 10))
def test_min_hopbound_monotone_in_alpha(g, seed):
    h = build_hopset(g, ParamSchedule.make(3, "linear"), seed=seed)
    vals = [measure_min_hopbound(g, h, a) for a in (1, 1.5, 2, 4, math.inf)]
    assert all(x >= y for x, y in zip(vals, vals[1:]))


def test_min_hopbound_on_pair_subset():
    g = path_graph(10)
    assert measure_min_hopbound(g, _empty(10), 1, pairs=[(0, 3), (5, 6)]) == 3


# --- jump-path certificates -----------------------------------------------------


def _setup(n=80, m=220, seed=3, k=4, f="identity", t=1):
    g = random_graph(n, m, seed, wmax=8)
    sched = ParamSchedule.make(k, f, t=t)
    h = build_hopset(g, sched, seed=seed)
    return g, sched, h, h.levels, compute_pivots(g, h.levels)


def test_trace_same_vertex():
    g, sched, h, la, pt = _setup()
    c = trace_jump_path(g, h, sched, la, pt, 5, 5)
    assert c.valid and c.hops == [5] and c.hop_count == 0


def test_trace_adjacent_pair():
    g, sched, h, la, pt = _setup()
    u, v, w = g.edges[0]
    c = trace_jump_path(g, h, sched, la, pt, u, v)
    assert c.valid and c.weight <= (2 * sched.t + 3) * w


def test_trace_disconnected_raises():
    g = Graph(4, [(0, 1, 1), (2, 3, 1)])
    sched = ParamSchedule.make(2, "identity")
    h = build_hopset(g, sched, seed=0)
    with pytest.raises(ValueError):
        trace_jump_path(g, h, sched, h.levels, compute_pivots(g, h.levels), 0, 3)


@pytest.mark.parametrize("k,f,t", [(4, "identity", 1), (8, "interleaved:2", 2), (3, "linear", 4)])
def test_trace_100_pairs_recheck(k, f, t):
    g, sched, h, la, pt = _setup(k=k, f=f, t=t)
    rng = np.random.default_rng(k)
    d = floyd_warshall(g.n, g.edges)
    ag = AugmentedGraph(g, h.edges)
    for _ in range(100):
        u, v = (int(x) for x in rng.choice(g.n, 2, replace=False))
        c = trace_jump_path(g, h, sched, la, pt, u, v)
        assert c.valid, c.diagnostic
        assert c.hops[0] == u and c.hops[-1] == v and len(c.hops) - 1 == c.hop_count
        # the certificate path is a real walk in G ∪ H, so the hop-bounded distance is no larger
        assert hop_bounded_distance(ag, u, v, c.hop_count) <= c.weight
        assert c.weight <= (2 * t + 3) * d[u][v]
        assert sum(seg for _, _, seg in c.segments) == pytest.approx(d[u][v])


def test_trace_flags_missing_edges():
    g, sched, h, la, pt = _setup(t=16)
    # find a certificate that leans on a hopset edge, then drop the hopset
    pairs = ((u, v) for u in range(g.n) for v in range(u + 1, g.n))
    for u, v in pairs:
        c = trace_jump_path(g, h, sched, la, pt, u, v)
        if any(not g.has_edge(a, b) for a, b in zip(c.hops, c.hops[1:])):
            break
    else:
        pytest.fail("no certificate used a hopset edge")
    bare = trace_jump_path(g, _empty(g.n), sched, la, pt, u, v)
    assert not bare.valid and "missing edge" in bare.diagnostic


def test_trace_rejects_wrong_hopset_weight():
    g, sched, h, la, pt = _setup()
    x, y, w = h.edges[0]
    bad = HopsetEdgeSet(g.n, ((x, y, w + 1),) + h.edges[1:], h.provenance)
    with pytest.raises(AssertionError):
        for v in range(g.n):
            trace_jump_path(g, bad, sched, la, pt, x, v)


# --- low-level shortcut -----------------------------------------------------------


def test_shortcut_not_applicable_when_pivot_close():
    g = path_graph(6)
    sched = ParamSchedule.make(4, "identity")
    la = LevelAssignment.forced_levels([1] * 6, sched.F, sched)
    h = build_hopset(g, sched, levels=la)
    assert trace_low_level_shortcut(g, h, la, compute_pivots(g, la), 0, 1, 1) == NOT_APPLICABLE


@pytest.mark.parametrize("seed", [5, 6])
def test_shortcut_valid_on_random_instances(seed):
    # interleaved:3 stores B_0..B_2 for every owner in the bottom block, which the shortcut needs
    g, sched, h, la, pt = _setup(n=120, m=300, seed=seed, k=12, f="interleaved:3")
    seen = 0
    for x in range(g.n):
        for y in range(g.n):
            for c in range(1, 4):
                cert = trace_low_level_shortcut(g, h, la, pt, x, y, c)
                if cert == NOT_APPLICABLE:
                    continue
                seen += 1
                assert cert.valid, cert.diagnostic
                assert cert.level < c
    assert seen > 0


# --- reports ----------------------------------------------------------------------


def test_report_json_and_csv():
    g = random_graph(25, 60, 2)
    h = build_hopset(g, ParamSchedule.make(3, "linear"), seed=1)
    rep = verify_hopset(g, h, 5, 2, keep_rows=True)
    doc = json.loads(rep.to_json())
    assert doc["kind"] == "hopset" and doc["passed"] == rep.passed and "rows" not in doc
    assert sum(doc["histogram"].values()) == rep.pairs_checked
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert rows[0] == ["u", "v", "d", "d_approx", "ratio"] and len(rows) == rep.pairs_checked + 1


def test_sampled_mode_above_exhaustive_limit():
    g = random_graph(400, 1200, 3)
    h = build_hopset(g, ParamSchedule.make(4, "identity"), seed=0)
    sched = h.schedule
    rep = verify_hopset(g, h, sched.hopset_stretch, sched.hop_budget, seed=1)
    assert not rep.exhaustive and rep.passed
    assert 0 < rep.pairs_checked <= 2000
    assert verify_hopset(g, h, 5, 2, seed=1).pairs_checked == rep.pairs_checked


def test_explicit_pair_list():
    g = path_graph(6)
    rep = verify_hopset(g, _empty(6), 1, 2, pairs=[(0, 2), (1, 2), (3, 5)])
    assert rep.passed and rep.pairs_checked == 3 and not rep.exhaustive


def test_spanner_report_on_built_spanner():
    g = random_graph(60, 180, 4, weighted=False)
    sched = ParamSchedule.make(4, "identity", variant="spanner-half")
    s = build_spanner_half(g, sched, seed=0)
    rep = verify_spanner(g, s, 4, 4 * sched.rF, keep_rows=True)
    assert rep.passed and len(rep.rows) == rep.pairs_checked
