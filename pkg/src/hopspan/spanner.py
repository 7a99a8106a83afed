"""Subgraph spanners: truncated bunch paths and half-bunch paths."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .core import LevelAssignment, PivotTable, bunch_levels, compute_pivots, sample_levels
from .graph import Graph, canonical_search, format_edge_list, parse_edge_list
from .schedule import ParamSchedule


@dataclass(frozen=True)
class SpannerEdgeSet:
    """Edge subset of ``G`` with the reason(s) each edge was kept."""

    n: int
    edges: tuple[tuple[int, int], ...]
    provenance: tuple[frozenset, ...]
    schedule: ParamSchedule | None = None
    levels: LevelAssignment | None = field(default=None, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def seed(self) -> int | None:
        return None if self.levels is None else self.levels.seed

    def subgraph(self, g: Graph) -> Graph:
        return Graph(g.n, [(u, v, g.weight(u, v)) for u, v in self.edges])

    def stats(self) -> dict:
        kinds: dict[str, int] = {}
        for prov in self.provenance:
            for kind in {k for k, _ in prov}:
                kinds[kind] = kinds.get(kind, 0) + 1
        out = {"edges": len(self.edges), "by_kind": dict(sorted(kinds.items()))}
        if self.schedule is not None and self.n > 0:
            s = self.schedule
            out["F2_n_pow"] = s.F ** 2 * self.n ** (1 + 1 / s.k)
        return out

    def header(self) -> dict:
        d = {"kind": "spanner", "n": self.n, "seed": self.seed, "stats": self.stats()}
        if self.schedule is not None:
            d["schedule"] = self.schedule.to_dict()
        if self.levels is not None:
            d["levels"] = self.levels.to_dict()
        return d

    def to_text(self, g: Graph) -> str:
        return format_edge_list(self.subgraph(g), weighted=False, header=[json.dumps(self.header(), sort_keys=True)])

    @classmethod
    def from_text(cls, text: str) -> "SpannerEdgeSet":
        """Edges and header back from :meth:`to_text`; provenance is not stored."""
        header = None
        for raw in text.splitlines():
            if raw.startswith("# {"):
                header = json.loads(raw[1:])
                break
        if header is None or header.get("kind") != "spanner":
            raise ValueError("missing spanner header")
        sub = parse_edge_list(text, header["n"])
        sched = ParamSchedule.from_dict(header["schedule"]) if "schedule" in header else None
        la = LevelAssignment.from_dict(header["levels"]) if "levels" in header else None
        edges = tuple((u, v) for u, v, _ in sub.edges)
        return cls(header["n"], edges, tuple(frozenset() for _ in edges), sched, la)


def _check_unweighted(g: Graph) -> None:
    if not g.unweighted:
        raise ValueError("spanner constructions need an unweighted graph")


class _PathCollector:
    def __init__(self):
        self.prov: dict[tuple[int, int], set] = {}

    def add_path(self, path: list[int], tag) -> None:
        for a, b in zip(path, path[1:]):
            key = (a, b) if a < b else (b, a)
            self.prov.setdefault(key, set()).add(tag)

    def finish(self, g: Graph, sched, la) -> SpannerEdgeSet:
        keys = sorted(self.prov)
        return SpannerEdgeSet(g.n, tuple(keys), tuple(frozenset(self.prov[k]) for k in keys), sched, la)


def _walk(parent: dict, src: int, v: int) -> list[int]:
    out = [v]
    while out[-1] != src:
        out.append(parent[out[-1]])
    return out


def pivot_path_edges(g: Graph, la: LevelAssignment, pt: PivotTable, out: _PathCollector) -> None:
    """Canonical paths ``P_{u, p_j(u)}`` grouped into one tree per ``(j, pivot)``."""
    for j in range(1, la.F):
        clusters: dict[int, list[int]] = {}
        for u in range(g.n):
            x = pt.p(j, u)
            if x >= 0 and x != u:
                clusters.setdefault(x, []).append(u)
        for x, members in clusters.items():
            radius = max(pt.d(j, u) for u in members)
            _, parent = canonical_search(g, x, radius)
            for u in members:
                out.add_path(_walk(parent, x, u), ("pivot-path", j))


def _bunch_paths(g, la, pt, f, out, half: bool, cap) -> None:
    tag = "half-bunch-path" if half else "bunch-path"
    for u in range(g.n):
        levels = bunch_levels(la, f, u)
        thrs = [pt.threshold(u, j) / (2 if half else 1) for j in levels]
        if not thrs:
            continue
        top = max(thrs)
        # strict thresholds on integer distances: d < thr  <=>  d <= ceil(thr) - 1
        radius = min(top if math.isinf(top) else math.ceil(top) - 1, cap)
        if radius < 0:
            continue
        dist, parent = canonical_search(g, u, radius)
        lv = la.levels
        for v in sorted(dist):
            if v == u:
                continue
            d = dist[v]
            for j, thr in zip(levels, thrs):
                if lv[v] >= j and d < thr and d <= cap:
                    out.add_path(_walk(parent, u, v), (tag, j))


def build_spanner_truncated(g: Graph, sched: ParamSchedule, seed: int | None = None, levels: LevelAssignment | None = None) -> SpannerEdgeSet:
    """Pivot-path trees plus canonical paths to bunch members within ``⌊r_F⌋``."""
    _check_unweighted(g)
    if sched.variant != "spanner-truncated":
        raise ValueError("needs a spanner-truncated schedule")
    la = _levels(g, sched, seed, levels)
    pt = compute_pivots(g, la)
    out = _PathCollector()
    pivot_path_edges(g, la, pt, out)
    _bunch_paths(g, la, pt, sched.f, out, half=False, cap=math.floor(sched.rF))
    return out.finish(g, sched, la)


def build_spanner_half(g: Graph, sched: ParamSchedule, seed: int | None = None, levels: LevelAssignment | None = None) -> SpannerEdgeSet:
    """Pivot-path trees plus canonical paths to half-bunch members."""
    _check_unweighted(g)
    if sched.variant != "spanner-half":
        raise ValueError("needs a spanner-half schedule")
    la = _levels(g, sched, seed, levels)
    pt = compute_pivots(g, la)
    out = _PathCollector()
    pivot_path_edges(g, la, pt, out)
    _bunch_paths(g, la, pt, sched.f, out, half=True, cap=math.inf)
    return out.finish(g, sched, la)


def _levels(g, sched, seed, levels) -> LevelAssignment:
    if levels is not None:
        if levels.F != sched.F or levels.n != g.n:
            raise ValueError("level assignment does not match graph/schedule")
        return levels
    if seed is None:
        raise ValueError("give a seed or a level assignment")
    return sample_levels(g, sched, seed)


def half_bunch_edge_count_check(g: Graph, la: LevelAssignment, pt: PivotTable, i: int, j: int, f=None) -> tuple[int, int, bool]:
    """Edges of the union of half-bunch paths from owners at level exactly ``i`` into level ``j``.

    Returns ``(lhs, rhs, lhs <= rhs)`` with ``rhs = n + 4·Σ_{u∈A_i} |B_j(u)|³``.
    """
    if f is None:
        if la.schedule is None:
            raise ValueError("need the level function")
        f = la.schedule.f
    if not (0 <= i <= la.F and i <= j <= min(f(i), la.F)):
        raise ValueError(f"need j in [i, f(i)], got i={i}, j={j}")
    lv = la.levels
    edges: set[tuple[int, int]] = set()
    rhs = g.n
    for u in range(g.n):
        if lv[u] < i:
            continue
        full = pt.threshold(u, j)
        full_r = full if math.isinf(full) else math.ceil(full) - 1
        dist, parent = canonical_search(g, u, full_r)
        b_full = sum(1 for v, d in dist.items() if lv[v] >= j and d < full)
        rhs += 4 * b_full ** 3
        if lv[u] != i:
            continue
        for v, d in dist.items():
            if v != u and lv[v] >= j and d < full / 2:
                path = _walk(parent, u, v)
                for a, b in zip(path, path[1:]):
                    edges.add((a, b) if a < b else (b, a))
    lhs = len(edges)
    return lhs, rhs, lhs <= rhs
