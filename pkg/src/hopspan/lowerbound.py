"""Lower-bound instances: high-girth graphs and the layered tower graph."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import LevelAssignment, compute_pivots, sample_levels
from .graph import INF, AugmentedGraph, Graph, all_pairs_distances, hop_bounded_path, shortest_path_vertices
from .hopset import HopsetEdgeSet, assemble_hopset
from .schedule import LevelFunction, ParamSchedule, big_lambdas, compute_lambdas, lower_bound_radii
from .verify import measure_min_hopbound

# --- high-girth graphs ------------------------------------------------------


@dataclass(frozen=True)
class CageSpec:
    name: str
    degree: int
    girth: int
    n: int
    graph: Graph

    @property
    def p(self) -> int:
        """Degree minus one."""
        return self.degree - 1


def lcf_graph(n: int, shifts: Sequence[int], repeats: int) -> Graph:
    """Hamiltonian cycle plus chords ``i -> i + shifts[i mod len]``."""
    edges = {(i, (i + 1) % n) if i < (i + 1) % n else ((i + 1) % n, i) for i in range(n)}
    seq = list(shifts) * repeats
    if len(seq) != n:
        raise ValueError("LCF sequence length must equal n")
    for i, s in enumerate(seq):
        j = (i + s) % n
        edges.add((min(i, j), max(i, j)))
    return Graph(n, sorted(edges))


def _petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def cage_library() -> dict[str, CageSpec]:
    """Cubic cages of girth 5 through 8."""
    return {
        "petersen": CageSpec("petersen", 3, 5, 10, _petersen()),
        "heawood": CageSpec("heawood", 3, 6, 14, lcf_graph(14, [5, -5], 7)),
        "mcgee": CageSpec("mcgee", 3, 7, 24, lcf_graph(24, [12, 7, -7], 8)),
        "tutte-coxeter": CageSpec("tutte-coxeter", 3, 8, 30, lcf_graph(30, [-13, -9, 7, -7, 9, 13], 5)),
    }


def get_cage(name: str) -> CageSpec:
    lib = cage_library()
    key = name.lower().replace("_", "-")
    if key not in lib:
        raise ValueError(f"unknown cage {name!r}; known: {sorted(lib)}")
    return lib[key]


def girth(g: Graph) -> float:
    """Length of the shortest cycle (inf for forests); BFS from every vertex."""
    best = INF
    for root in range(g.n):
        dist = {root: 0}
        parent = {root: -1}
        q = deque([root])
        while q:
            u = q.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for v, _ in g.adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    q.append(v)
                elif v != parent[u]:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


def random_regular_high_girth(n: int, degree: int, min_girth: int, seed: int = 0, max_tries: int = 10000) -> Graph:
    """Random ``degree``-regular graph with girth ``>= min_girth`` by rejection."""
    if (n * degree) % 2 or degree >= n:
        raise ValueError("no simple regular graph with these parameters")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), degree)
    for _ in range(max_tries):
        perm = rng.permutation(stubs)
        pairs = perm.reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        keys = {(int(min(a, b)), int(max(a, b))) for a, b in pairs}
        if len(keys) != len(pairs):
            continue
        g = Graph(n, sorted(keys))
        if girth(g) >= min_girth:
            return g
    raise RuntimeError(f"no {degree}-regular graph on {n} vertices with girth >= {min_girth} in {max_tries} tries")


def count_delta_paths(g: Graph, delta: int) -> int:
    """Unordered pairs at hop distance exactly ``delta``."""
    if delta < 1:
        raise ValueError("delta must be >= 1")
    d = all_pairs_distances(g)
    return int(np.sum(np.triu(d == delta, k=1)))


@dataclass(frozen=True)
class GirthBound:
    n: int
    p: int
    delta: int
    alpha: float
    min_hopset_size: float  # n·p / (2αδ²)
    path_floor: float  # ½·n·p^δ
    usage_cap: float  # αδ²·p^(δ-1)
    beta_floor: int | None  # ⌊(k-2)/(α+1)⌋


def girth_bound_evaluate(n: int, p: int, delta: int, alpha, k: int | None = None, gamma: int | None = None) -> GirthBound:
    """Arithmetic of the counting argument against short-hop hopsets."""
    if min(n, p, delta) <= 0 or alpha <= 0:
        raise ValueError("parameters must be positive")
    if gamma is not None and delta != math.floor((gamma - 1) / (alpha + 1)):
        raise ValueError(f"delta={delta} does not equal floor((gamma-1)/(alpha+1)) for gamma={gamma}")
    beta = None if k is None else math.floor((k - 2) / (alpha + 1))
    return GirthBound(
        n, p, delta, float(alpha),
        n * p / (2 * alpha * delta ** 2),
        0.5 * n * p ** delta,
        alpha * delta ** 2 * p ** (delta - 1),
        beta,
    )


def feasible_deltas(gamma: int) -> list[tuple[int, int]]:
    """Integer ``(α, δ)`` with ``δ = ⌊(γ-1)/(α+1)⌋ >= 1``."""
    out = []
    alpha = 1
    while (gamma - 1) // (alpha + 1) >= 1:
        out.append((alpha, (gamma - 1) // (alpha + 1)))
        alpha += 1
    return out


def _simple_paths_upto(g: Graph, u: int, v: int, limit: int) -> list[list[int]]:
    out = []
    stack = [(u, [u])]
    while stack:
        x, path = stack.pop()
        if x == v:
            out.append(path)
            continue
        if len(path) - 1 >= limit:
            continue
        for y, _ in g.adj[x]:
            if y not in path:
                stack.append((y, path + [y]))
    return out


def unique_shortest_paths_check(g: Graph, alpha: int, delta: int) -> tuple[int, int]:
    """Pairs at distance ``δ`` and how many have any second path of length ``<= αδ``.

    Exhaustive enumeration of simple paths up to length ``αδ``.
    """
    d = all_pairs_distances(g)
    pairs = failures = 0
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if d[u, v] != delta:
                continue
            pairs += 1
            if len(_simple_paths_upto(g, u, v, int(alpha * delta))) != 1:
                failures += 1
    return pairs, failures


def _path_edge_set(path: list[int]) -> set[tuple[int, int]]:
    return {(a, b) if a < b else (b, a) for a, b in zip(path, path[1:])}


@dataclass
class UsageReport:
    pairs: int
    passing: int
    witnessed: int
    witness_failures: int
    max_usage: int
    usage_cap: float
    usage: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.witness_failures == 0 and self.max_usage <= self.usage_cap


def hopset_path_usage_check(g: Graph, h, alpha, delta: int, beta: int | None = None) -> UsageReport:
    """Witness and usage bookkeeping of the counting argument on a high-girth graph.

    For every distance-``δ`` pair whose best ``β``-hop path in ``G ∪ H`` has
    weight ``<= αδ``, some hopset edge on it must have a detour sharing an
    edge with the pair's unique path. ``usage[e]`` counts the distance-``δ``
    paths sharing an edge with ``P_e`` for hopset edges of weight ``<= αδ``.
    """
    gam = girth(g)
    if not gam > (alpha + 1) * delta:
        raise ValueError(f"girth {gam} is not above (alpha+1)*delta = {(alpha + 1) * delta}")
    beta = delta - 1 if beta is None else beta
    extra = h.edges if isinstance(h, HopsetEdgeSet) else tuple(h)
    ag = AugmentedGraph(g, extra)
    d = all_pairs_distances(g)
    degs = {len(a) for a in g.adj}
    p = max(degs) - 1
    detours = {}
    for x, y, w in extra:
        if w <= alpha * delta and x != y:
            detours[(min(x, y), max(x, y))] = _path_edge_set(shortest_path_vertices(g, x, y))
    usage = {e: 0 for e in detours}
    pairs = passing = witnessed = fails = 0
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if d[u, v] != delta:
                continue
            pairs += 1
            puv = _path_edge_set(shortest_path_vertices(g, u, v))
            for e, det in detours.items():
                if det & puv:
                    usage[e] += 1
            wgt, path = hop_bounded_path(ag, u, v, beta)
            if path is None or wgt > alpha * delta:
                continue
            passing += 1
            used = [(min(a, b), max(a, b)) for a, b in zip(path, path[1:]) if not g.has_edge(a, b)]
            if beta < delta and not any(e in detours and detours[e] & puv for e in used):
                fails += 1
            elif used:
                witnessed += 1
    cap = alpha * delta ** 2 * p ** (delta - 1)
    return UsageReport(pairs, passing, witnessed, fails, max(usage.values(), default=0), cap, usage)


# --- tower graph --------------------------------------------------------------


@dataclass(frozen=True)
class TowerGraph:
    graph: Graph
    k: int
    f: LevelFunction
    alpha: Fraction
    schedule: ParamSchedule
    radii: tuple[Fraction, ...]  # lower-bound radii r_0..r_F
    scale: int  # all weights multiplied by this integer
    towers: int
    layers: tuple[tuple[range, ...], ...]  # layers[c][i]
    n_param: int
    layer_mult: int
    non_asymptotic: bool

    @property
    def F(self) -> int:
        return self.schedule.F

    @property
    def path(self) -> list[int]:
        return [self.layers[c][0][0] for c in range(self.towers)]

    def locate(self, v: int) -> tuple[int, int]:
        """``(tower, layer)`` of vertex ``v``."""
        size = self.layers[0][-1].stop - self.layers[0][0].start
        c = v // size
        for i, rg in enumerate(self.layers[c]):
            if v in rg:
                return c, i
        raise ValueError(f"vertex {v} not in any layer")

    def expected_distance(self, c: int, i: int, d: int, j: int) -> Fraction:
        """Scaled ``r_i + |d-c| + r_j - 2`` for layers in different towers."""
        return self.scale * (self.radii[i] + abs(d - c) + self.radii[j] - 2)

    def sidecar(self) -> dict:
        return {
            "kind": "tower",
            "k": self.k,
            "f": self.f.to_dict(),
            "alpha": str(self.alpha),
            "n_param": self.n_param,
            "towers": self.towers,
            "layer_mult": self.layer_mult,
            "scale": self.scale,
            "non_asymptotic": self.non_asymptotic,
            "F": self.F,
            "lambdas": [str(x) for x in self.schedule.lambdas],
            "radii": [str(r) for r in self.radii],
            "layers": [[[rg.start, rg.stop] for rg in tower] for tower in self.layers],
        }


def smallest_feasible_n(k: int, f: LevelFunction, layer_mult: int | None = None, max_a: int = 8) -> int:
    """Smallest ``n = 2^(2ka)`` whose top layer is non-empty."""
    lams, F = compute_lambdas(k, f)
    for a in range(1, max_a + 1):
        n = 2 ** (2 * k * a)
        mult = layer_mult if layer_mult is not None else 2 * k * a
        if _top_size(n, k, lams, F, mult) >= 1:
            return n
    raise ValueError("no feasible n found")


def _middle_sizes(n: int, k: int, lams, F: int, mult: int) -> list[int]:
    e = int(round(math.log2(n)))
    out = []
    for i in range(1, F - 1):
        s = sum(lams[:i])
        # n^(s/k) = 2^(e·s/k), exact when n = 2^(2ka)
        out.append(mult * int(round(2 ** (e * s / k))))
    return out


def _top_size(n: int, k: int, lams, F: int, mult: int) -> int:
    tower = int(round(n ** (1 - 1 / (2 * k))))
    return tower - 1 - sum(_middle_sizes(n, k, lams, F, mult))


def build_tower_graph(
    k: int,
    f: LevelFunction,
    alpha,
    n: int | None = None,
    *,
    towers: int | None = None,
    layer_mult: int | None = None,
    top_size: int | None = None,
) -> TowerGraph:
    """Path of towers; tower layers are cliques joined by complete bipartite rungs.

    Exact mode uses ``n = 2^(2ka)``, ``n^(1/(2k))`` towers and ``log₂ n`` as the
    layer multiplier. ``towers``, ``layer_mult`` and ``top_size`` override
    those for desk-scale runs and mark the instance non-asymptotic.
    """
    alpha = Fraction(alpha)
    lams, F = compute_lambdas(k, f)
    if n is None:
        n = smallest_feasible_n(k, f, layer_mult)
    e = math.log2(n)
    if not (e.is_integer() and int(e) % (2 * k) == 0):
        raise ValueError("n must be of the form 2^(2ka)")
    mult = int(e) if layer_mult is None else int(layer_mult)
    if mult < 1:
        raise ValueError("layer multiplier must be >= 1")
    n_towers = int(round(n ** (1 / (2 * k)))) if towers is None else int(towers)
    if n_towers < 1:
        raise ValueError("need at least one tower")
    middle = _middle_sizes(n, k, lams, F, mult)
    top = _top_size(n, k, lams, F, mult) if top_size is None else int(top_size)
    if top < 1:
        raise ValueError(
            "infeasible tower: 1 + sum of middle layer sizes must stay below n^(1-1/(2k)) "
            "(feasibility requires (F-1)·log2(n)·n^(1-1/k) < n^(1-1/(2k))); "
            "use a larger n or a desk-scale override"
        )
    sizes = [1] + middle + [top] if F >= 2 else [1]
    radii = lower_bound_radii(f, alpha, F)
    scale = math.lcm(*(r.denominator for r in radii))
    tower_size = sum(sizes)
    edges = []
    layers = []
    for c in range(n_towers):
        base = c * tower_size
        rgs = []
        start = base
        for s in sizes:
            rgs.append(range(start, start + s))
            start += s
        layers.append(tuple(rgs))
        for i in range(F - 1):
            cur = rgs[i]
            for a in cur:
                for b in cur:
                    if a < b:
                        edges.append((a, b, scale))
            w = int((radii[i + 1] - radii[i]) * scale)
            for a in cur:
                for b in rgs[i + 1]:
                    edges.append((a, b, w))
        if c:
            edges.append((base - tower_size, base, scale))
    g = Graph(n_towers * tower_size, edges)
    sched = ParamSchedule.make(k, f, t=4 * alpha, variant="hopset")
    non_asym = towers is not None or layer_mult is not None or top_size is not None
    return TowerGraph(g, k, f, alpha, sched, radii, scale, n_towers, tuple(layers), n, mult, non_asym)


def forced_assignment(tg: TowerGraph) -> LevelAssignment:
    """First vertex of every layer ``j`` at level ``j``; every other vertex at level 0."""
    levels = [0] * tg.graph.n
    for tower in tg.layers:
        for j, rg in enumerate(tower):
            levels[rg.start] = j
    return LevelAssignment.forced_levels(levels, tg.F, tg.schedule)


def check_level_placement(tg: TowerGraph, la: LevelAssignment) -> tuple[dict, bool]:
    """Per ``(tower, j)`` with ``j < F-1``: layer ``j`` meets ``A_j`` and misses ``A_{j+1}``."""
    out = {}
    for c, tower in enumerate(tg.layers):
        for j in range(tg.F - 1):
            lv = [la.levels[v] for v in tower[j]]
            out[(c, j)] = any(x >= j for x in lv) and not any(x >= j + 1 for x in lv)
    return out, all(out.values())


@dataclass
class CrossTowerReport:
    checked: int
    exempt: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def check_cross_tower_edges(tg: TowerGraph, h: HopsetEdgeSet, la: LevelAssignment | None = None) -> CrossTowerReport:
    """Hopset edges between towers ``c != d`` at layers ``i <= j < F-2`` must weigh more than ``(α+1)(|d-c|-2)``."""
    checked = exempt = 0
    bad = []
    for x, y, w in h.edges:
        (c, i), (d, j) = tg.locate(x), tg.locate(y)
        if i > j:
            (c, i), (d, j) = (d, j), (c, i)
        if c == d or j >= tg.F - 2:
            exempt += 1
            continue
        checked += 1
        if not Fraction(w) > tg.scale * (tg.alpha + 1) * (abs(d - c) - 2):
            bad.append((x, y, w))
    return CrossTowerReport(checked, exempt, bad)


def tower_distance_check(tg: TowerGraph) -> int:
    """Number of cross-tower pairs whose distance differs from the closed form."""
    n = tg.graph.n
    tower = np.empty(n, dtype=np.int64)
    layer = np.empty(n, dtype=np.int64)
    for c, rgs in enumerate(tg.layers):
        for i, rg in enumerate(rgs):
            tower[rg.start : rg.stop] = c
            layer[rg.start : rg.stop] = i
    # scaled radii are integers, so the closed form is exact in float64
    r = np.array([float(x * tg.scale) for x in tg.radii])
    dist = all_pairs_distances(tg.graph)
    expect = r[layer][:, None] + r[layer][None, :] + tg.scale * (np.abs(tower[:, None] - tower[None, :]) - 2)
    cross = tower[:, None] != tower[None, :]
    return int(np.sum(cross & (dist != expect)))


def r_floor_closed_form(k: int, alpha: float) -> float:
    """``(1/8)·k^(1 + 1/(2 log₂ α))``."""
    return k ** (1 + 1 / (2 * math.log2(alpha))) / 8


@dataclass
class TowerExperiment:
    k: int
    f: str
    alpha: float
    F: int
    r_F_minus_2: float
    floor: float  # (r_{F-2} - 1) / (5α²)
    closed_form: float  # (1/8)·k^(1+1/(2 log₂ α))
    beta_star: int | None
    cross_violations: int
    hopset_size: int
    non_asymptotic: bool
    sampled: list = field(default_factory=list)  # (seed, placement ok, β*)

    @property
    def ok(self) -> bool:
        return self.cross_violations == 0 and self.beta_star is not None and self.beta_star >= self.floor


def tower_hopbound_experiment(k: int, f: LevelFunction, alpha, n: int | None = None, seeds: Sequence[int] = (), **overrides) -> TowerExperiment:
    """Forced-mode β* on ``(u_0, path vertex)`` pairs against the floor; sampled runs optional."""
    tg = build_tower_graph(k, f, alpha, n, **overrides)
    la = forced_assignment(tg)
    pt = compute_pivots(tg.graph, la)
    h = assemble_hopset(tg.graph, tg.schedule, la, pt)
    rep = check_cross_tower_edges(tg, h, la)
    path = tg.path
    pairs = [(path[0], v) for v in path[1:]] or None
    beta = measure_min_hopbound(tg.graph, h, tg.alpha, pairs)
    F = tg.F
    rf2 = tg.radii[F - 2] if F >= 2 else tg.radii[0]
    floor = float((rf2 - 1) / (5 * tg.alpha ** 2))
    sampled = []
    for s in seeds:
        las = sample_levels(tg.graph, tg.schedule, s)
        _, placed = check_level_placement(tg, las)
        hs = assemble_hopset(tg.graph, tg.schedule, las, compute_pivots(tg.graph, las))
        sampled.append((s, placed, measure_min_hopbound(tg.graph, hs, tg.alpha, pairs)))
    return TowerExperiment(
        k, str(f), float(tg.alpha), F, float(rf2), floor,
        r_floor_closed_form(k, float(tg.alpha)) if tg.alpha >= 2 else float("nan"),
        beta, len(rep.violations), len(h), tg.non_asymptotic, sampled,
    )


def level_placement_probability_floor(n: int, k: int) -> float:
    """``e^(-4k·n^(-1/(4k)))``."""
    return math.exp(-4 * k * n ** (-1 / (4 * k)))


def big_lambda_floor_holds(k: int, f: LevelFunction) -> bool:
    """``Λ_{j+1} = Λ_j + Λ_{f⁻¹(j)}`` throughout and ``Λ_{F-2} >= (k+2)/4``."""
    lams, F = compute_lambdas(k, f)
    L = big_lambdas(lams)
    rec = all(L[j + 1] == L[j] + L[f.inverse(j)] for j in range(F))
    return rec and (F < 2 or 4 * L[F - 2] >= k + 2)
