"""Undirected weighted graphs, exact shortest paths and hop-bounded distances.

Shortest paths are made unique by a lexicographic tie-break: among paths of
equal weight the one whose edge set has the smallest sum of ``2**rank(e)`` wins,
where ``rank`` orders edges by ``(min id, max id)``. Unique shortest paths are
symmetric and closed under taking subpaths, which the spanner constructions
rely on.
"""

from __future__ import annotations

import heapq
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

INF = math.inf

Edge = tuple[int, int, float]


class Graph:
    """Immutable undirected graph on vertices ``0..n-1``.

    Edges are stored once with ``u < v``; ``adj[u]`` lists ``(v, w)`` pairs
    sorted by neighbour id.
    """

    __slots__ = ("n", "edges", "adj", "_weight", "_rank")

    def __init__(self, n: int, edges: Iterable[Sequence]):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        norm: dict[tuple[int, int], float] = {}
        for e in edges:
            if len(e) == 2:
                u, v, w = e[0], e[1], 1
            else:
                u, v, w = e[0], e[1], e[2]
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if w < 0 or (isinstance(w, float) and math.isnan(w)):
                raise ValueError(f"negative or NaN weight on edge ({u},{v})")
            key = (u, v) if u < v else (v, u)
            if key in norm:
                raise ValueError(f"duplicate edge {key}")
            norm[key] = w
        keys = sorted(norm)
        self.n = n
        self.edges: tuple[Edge, ...] = tuple((u, v, norm[(u, v)]) for u, v in keys)
        self._weight = norm
        self._rank = {key: i for i, key in enumerate(keys)}
        adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        for lst in adj:
            lst.sort()
        self.adj = tuple(tuple(lst) for lst in adj)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def unweighted(self) -> bool:
        return all(w == 1 for _, _, w in self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._weight

    def weight(self, u: int, v: int) -> float:
        return self._weight[(u, v) if u < v else (v, u)]

    def rank(self, u: int, v: int) -> int:
        return self._rank[(u, v) if u < v else (v, u)]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))


@dataclass(frozen=True)
class DistanceRow:
    source: int
    dist: list
    parent: list  # -1 for the source and unreachable vertices

    def path_to(self, v: int) -> list[int] | None:
        """Vertex sequence source..v along the parent pointers."""
        if self.dist[v] == INF:
            return None
        out = [v]
        while out[-1] != self.source:
            out.append(self.parent[out[-1]])
        out.reverse()
        return out


@dataclass(frozen=True)
class AugmentedGraph:
    """``G ∪ H``: the base graph plus weighted auxiliary edges."""

    base: Graph
    extra: tuple[Edge, ...] = field(default_factory=tuple)

    def check_weights(self, tol: float = 0.0) -> list[Edge]:
        """Extra edges whose weight differs from the base distance."""
        bad = []
        rows: dict[int, DistanceRow] = {}
        for x, y, w in self.extra:
            if x not in rows:
                rows[x] = dijkstra(self.base, x)
            if abs(rows[x].dist[y] - w) > tol:
                bad.append((x, y, w))
        return bad

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Directed (src, dst, w) arrays with the minimum weight per pair."""
        best: dict[tuple[int, int], float] = {}
        for u, v, w in self.base.edges:
            best[(u, v)] = w
        for x, y, w in self.extra:
            if x == y:
                continue
            key = (x, y) if x < y else (y, x)
            if key not in best or w < best[key]:
                best[key] = w
        if not best:
            z = np.zeros(0, dtype=np.int64)
            return z, z, np.zeros(0)
        keys = np.array(list(best.keys()), dtype=np.int64)
        ws = np.array(list(best.values()), dtype=float)
        src = np.concatenate([keys[:, 0], keys[:, 1]])
        dst = np.concatenate([keys[:, 1], keys[:, 0]])
        return src, dst, np.concatenate([ws, ws])


def _check_vertex(g: Graph, v: int) -> None:
    if not isinstance(v, (int, np.integer)) or not 0 <= v < g.n:
        raise ValueError(f"invalid vertex id {v!r} for graph with n={g.n}")


def canonical_search(g: Graph, source: int, radius: float = INF) -> tuple[dict, dict]:
    """Canonical shortest-path tree from ``source`` over vertices with dist <= radius.

    Returns ``(dist, parent)`` dicts. Keys are ``(weight, perturbation)`` so
    the tree paths are the unique canonical shortest paths.
    """
    _check_vertex(g, source)
    dist = {source: 0}
    pert = {source: 0}
    parent = {source: -1}
    done = set()
    heap = [(0, 0, source)]
    adj, rank = g.adj, g._rank
    while heap:
        d, p, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w in adj[u]:
            nd = d + w
            if nd > radius or v in done:
                continue
            np_ = p + (1 << rank[(u, v) if u < v else (v, u)])
            od = dist.get(v)
            if od is None or nd < od or (nd == od and np_ < pert[v]):
                dist[v] = nd
                pert[v] = np_
                parent[v] = u
                heapq.heappush(heap, (nd, np_, v))
    return dist, parent


def dijkstra(g: Graph, source: int) -> DistanceRow:
    """Exact single-source distances with canonical parent pointers."""
    dist_d, par_d = canonical_search(g, source)
    dist = [INF] * g.n
    parent = [-1] * g.n
    for v, d in dist_d.items():
        dist[v] = d
        parent[v] = par_d[v]
    return DistanceRow(source, dist, parent)


def bounded_distances(g: Graph, source: int, radius: float = INF, strict: bool = True) -> dict:
    """Plain Dijkstra truncated at ``radius`` (exclusive when ``strict``)."""
    if radius < 0 or (strict and radius <= 0):
        return {}
    dist = {source: 0}
    done = set()
    heap = [(0, source)]
    adj = g.adj
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w in adj[u]:
            nd = d + w
            if nd > radius or (strict and nd >= radius):
                continue
            od = dist.get(v)
            if od is None or nd < od:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def multi_source_dijkstra(g: Graph, sources: Iterable[int]) -> tuple[list, list]:
    """Distance to and id of the nearest source; ties go to the smallest id."""
    srcs = sorted(set(sources))
    if not srcs:
        raise ValueError("multi_source_dijkstra needs a non-empty source set")
    for s in srcs:
        _check_vertex(g, s)
    dist = [INF] * g.n
    nearest = [-1] * g.n
    heap = [(0, s, s) for s in srcs]
    for s in srcs:
        dist[s] = 0
        nearest[s] = s
    done = [False] * g.n
    adj = g.adj
    while heap:
        d, s, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w in adj[u]:
            nd = d + w
            if not done[v] and (nd < dist[v] or (nd == dist[v] and s < nearest[v])):
                dist[v] = nd
                nearest[v] = s
                heapq.heappush(heap, (nd, s, v))
    return dist, nearest


def shortest_path_vertices(g: Graph, u: int, v: int) -> list[int] | None:
    """Canonical shortest path as a vertex list, or ``None`` if unreachable."""
    _check_vertex(g, v)
    dist, parent = canonical_search(g, u)
    if v not in dist:
        return None
    out = [v]
    while out[-1] != u:
        out.append(parent[out[-1]])
    out.reverse()
    return out


def shortest_path_edges(g: Graph, u: int, v: int) -> list[tuple[int, int]] | None:
    """Edges of the canonical shortest path from u to v; ``None`` when unreachable."""
    path = shortest_path_vertices(g, u, v)
    if path is None:
        return None
    return list(zip(path, path[1:]))


def iter_hop_rounds(ag: AugmentedGraph, sources: Sequence[int]):
    """Yield ``(h, D_h)`` for ``h = 0, 1, ...`` where ``D_h[r, v] = d^(h)(sources[r], v)``.

    Round ``h`` relaxes every directed edge of ``G ∪ H`` once (min-plus
    product). The generator stops after the first round that changes
    nothing; the last matrix is then final for every larger budget.
    """
    n = ag.base.n
    sources = list(sources)
    cur = np.full((len(sources), n), INF)
    if sources:
        cur[np.arange(len(sources)), sources] = 0.0
    yield 0, cur
    src, dst, w = ag.edge_arrays()
    if len(src) == 0:
        return
    order = np.argsort(dst, kind="stable")
    src, dst, w = src[order], dst[order], w[order]
    udst, starts = np.unique(dst, return_index=True)
    h = 0
    while True:
        mins = np.minimum.reduceat(cur[:, src] + w, starts, axis=1)
        nxt = cur.copy()
        nxt[:, udst] = np.minimum(nxt[:, udst], mins)
        h += 1
        if np.array_equal(nxt, cur):
            return
        cur = nxt
        yield h, cur


def hop_bounded_rows(ag: AugmentedGraph, sources: Sequence[int], betas: Sequence[int]) -> dict[int, np.ndarray]:
    """Hop-bounded distance rows ``d^(β)(s, ·)`` for every requested β."""
    want = sorted(set(int(b) for b in betas))
    if want and want[0] < 0:
        raise ValueError("hop budget must be non-negative")
    out: dict[int, np.ndarray] = {}
    last = None
    it = iter_hop_rounds(ag, sources)
    pending = list(want)
    for h, mat in it:
        last = mat
        while pending and pending[0] == h:
            out[pending.pop(0)] = mat
        if not pending:
            break
    for b in pending:
        out[b] = last
    return out


def hop_bounded_distance(ag: AugmentedGraph, u: int, v: int, beta: int) -> float:
    """Length of the lightest u-v path in ``G ∪ H`` with at most ``beta`` edges."""
    _check_vertex(ag.base, u)
    _check_vertex(ag.base, v)
    if beta < 0:
        raise ValueError("beta must be >= 0")
    return float(hop_bounded_rows(ag, [u], [beta])[beta][0, v])


def hop_bounded_path(ag: AugmentedGraph, u: int, v: int, beta: int) -> tuple[float, list[int] | None]:
    """Lightest path with at most ``beta`` edges, with its vertex sequence."""
    n = ag.base.n
    nbr: list[dict[int, float]] = [dict() for _ in range(n)]
    for a, b, w in ag.base.edges:
        nbr[a][b] = w
        nbr[b][a] = w
    for a, b, w in ag.extra:
        if a != b and (b not in nbr[a] or w < nbr[a][b]):
            nbr[a][b] = w
            nbr[b][a] = w
    # layer h maps vertex -> (dist, predecessor); predecessor None means "carried over"
    layers: list[dict[int, tuple[float, int | None]]] = [{u: (0, None)}]
    for _ in range(beta):
        prev = layers[-1]
        nxt = {x: (d, None) for x, (d, _) in prev.items()}
        for x, (dx, _) in prev.items():
            for y, w in nbr[x].items():
                nd = dx + w
                if y not in nxt or nd < nxt[y][0]:
                    nxt[y] = (nd, x)
        layers.append(nxt)
    if v not in layers[-1]:
        return INF, None
    path = [v]
    x, h = v, beta
    while h > 0:
        p = layers[h][x][1]
        if p is not None:
            path.append(p)
            x = p
        h -= 1
    path.reverse()
    return layers[-1][v][0], path


def all_pairs_distances(g: Graph, sources: Sequence[int] | None = None) -> np.ndarray:
    """Exact distance matrix (rows = sources) via scipy's Dijkstra."""
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import dijkstra as sp_dijkstra

    n = g.n
    if n == 0:
        return np.zeros((0, 0))
    if g.m == 0:
        return _all_pairs_python(g, sources)
    arr = np.array(g.edges, dtype=float)
    rows = arr[:, 0].astype(np.int64)
    cols = arr[:, 1].astype(np.int64)
    ws = arr[:, 2]
    # scipy drops explicit zeros, so zero-weight edges take the slow path
    if np.any(ws == 0):
        return _all_pairs_python(g, sources)
    mat = csr_matrix((ws, (rows, cols)), shape=(n, n))
    idx = None if sources is None else np.asarray(sources, dtype=np.int64)
    return sp_dijkstra(mat, directed=False, indices=idx)


def _all_pairs_python(g: Graph, sources: Sequence[int] | None) -> np.ndarray:
    srcs = range(g.n) if sources is None else sources
    return np.array([dijkstra(g, s).dist for s in srcs], dtype=float)


# --- edge-list files -------------------------------------------------------


def parse_edge_list(text: str, n: int | None = None) -> Graph:
    """Parse ``u v [w]`` lines; ``#`` starts a comment.

    A leading comment of the form ``# n <count>`` fixes the vertex count so
    trailing isolated vertices survive a round trip.
    """
    edges = []
    declared = None
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), 1):
        head, _, comment = raw.partition("#")
        tokens = comment.split()
        if not head.strip() and len(tokens) == 2 and tokens[0] == "n":
            declared = int(tokens[1])
            continue
        parts = head.split()
        if not parts:
            continue
        if len(parts) not in (2, 3):
            raise ValueError(f"line {lineno}: expected 'u v [w]', got {raw!r}")
        u, v = int(parts[0]), int(parts[1])
        if len(parts) == 3:
            w = float(parts[2])
            if w.is_integer():
                w = int(w)
        else:
            w = 1
        edges.append((u, v, w))
        max_id = max(max_id, u, v)
    if n is None:
        n = declared if declared is not None else max_id + 1
    return Graph(n, edges)


def read_edge_list(path: str | os.PathLike, n: int | None = None) -> Graph:
    with open(path) as fh:
        return parse_edge_list(fh.read(), n)


def format_weight(w) -> str:
    if isinstance(w, float) and w.is_integer():
        return str(int(w))
    return repr(w) if isinstance(w, float) else str(w)


def format_edge_list(g: Graph, weighted: bool | None = None, header: Sequence[str] = ()) -> str:
    if weighted is None:
        weighted = not g.unweighted
    lines = [f"# {h}" for h in header]
    lines.append(f"# n {g.n}")
    for u, v, w in g.edges:
        lines.append(f"{u} {v} {format_weight(w)}" if weighted else f"{u} {v}")
    return "\n".join(lines) + "\n"


def write_edge_list(g: Graph, path: str | os.PathLike, weighted: bool | None = None, header: Sequence[str] = ()) -> None:
    with open(path, "w") as fh:
        fh.write(format_edge_list(g, weighted, header))


# --- random instances ------------------------------------------------------


def random_graph(n: int, m: int, seed: int, weighted: bool = True, wmax: int = 10, connected: bool = True) -> Graph:
    """``m`` distinct edges on ``n`` vertices; integer weights in ``[1, wmax]``.

    With ``connected`` the first ``n-1`` edges form a random spanning tree.
    """
    if n < 1 or m < 0 or m > n * (n - 1) // 2:
        raise ValueError(f"cannot place {m} edges on {n} vertices")
    if connected and n > 1 and m < n - 1:
        raise ValueError("a connected graph needs at least n-1 edges")
    rng = np.random.default_rng(seed)
    chosen: set[tuple[int, int]] = set()
    if connected and n > 1:
        order = rng.permutation(n)
        for i in range(1, n):
            a, b = int(order[i]), int(order[rng.integers(0, i)])
            chosen.add((min(a, b), max(a, b)))
    while len(chosen) < m:
        a, b = (int(x) for x in rng.integers(0, n, 2))
        if a != b:
            chosen.add((min(a, b), max(a, b)))
    edges = sorted(chosen)
    ws = rng.integers(1, wmax + 1, len(edges)) if weighted else np.ones(len(edges), dtype=np.int64)
    return Graph(n, [(a, b, int(w)) for (a, b), w in zip(edges, ws)])
