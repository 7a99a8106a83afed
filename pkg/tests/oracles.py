"""Slow, independent reference implementations used only by the tests."""

from __future__ import annotations

import math
from fractions import Fraction

INF = math.inf


def bellman_ford(n, edges, source):
    dist = [INF] * n
    dist[source] = 0
    for _ in range(n):
        changed = False
        for u, v, w in edges:
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                changed = True
            if dist[v] + w < dist[u]:
                dist[u] = dist[v] + w
                changed = True
        if not changed:
            break
    return dist


def floyd_warshall(n, edges):
    d = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for u, v, w in edges:
        if w < d[u][v]:
            d[u][v] = d[v][u] = w
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik == INF:
                continue
            di = d[i]
            for j in range(n):
                if dik + dk[j] < di[j]:
                    di[j] = dik + dk[j]
    return d


def bfs(n, edges, source):
    adj = [[] for _ in range(n)]
    for u, v, _ in edges:
        adj[u].append(v)
        adj[v].append(u)
    dist = [INF] * n
    dist[source] = 0
    frontier = [source]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if dist[v] == INF:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    return dist


def enumerate_hop_paths(n, edge_lists, source, max_hops):
    """Best weight per (target, hop count) over all simple paths from ``source``.

    ``edge_lists`` may hold parallel edges; each is tried separately.
    """
    adj = [[] for _ in range(n)]
    for edges in edge_lists:
        for u, v, w in edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
    best = [[INF] * (max_hops + 1) for _ in range(n)]
    best[source][0] = 0
    on_path = [False] * n
    on_path[source] = True

    def go(u, hops, acc):
        if hops == max_hops:
            return
        for v, w in adj[u]:
            if on_path[v]:
                continue
            tot = acc + w
            if tot < best[v][hops + 1]:
                best[v][hops + 1] = tot
            on_path[v] = True
            go(v, hops + 1, tot)
            on_path[v] = False

    go(source, 0, 0)
    # at most beta edges: running minimum over hop counts
    for row in best:
        for h in range(1, max_hops + 1):
            row[h] = min(row[h], row[h - 1])
    return best


def unroll_radii(finv, F, a, b, plus=0, r0=Fraction(1)):
    """``r_i = a·r_{i-1} + b·r_{finv(i-1)} + plus``, written out longhand."""
    r = [Fraction(r0)]
    for i in range(1, F + 1):
        r.append(Fraction(a) * r[i - 1] + Fraction(b) * r[finv(i - 1)] + plus)
    return r


def lambdas_longhand(k, finv, third=False):
    lam = []
    total = Fraction(0)
    while total < k + 1:
        j = len(lam)
        val = 1 + sum(lam[: finv(j)], Fraction(0))
        if third:
            val /= 3
        lam.append(val)
        total += val
    return lam
