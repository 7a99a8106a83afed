"""Level sampling, pivots, bunches and the score of a vertex."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .graph import INF, Graph, bounded_distances, multi_source_dijkstra
from .schedule import ParamSchedule


@dataclass(frozen=True)
class LevelAssignment:
    """Level ``i(u)`` of every vertex; ``A_j = {u : i(u) >= j}``."""

    levels: tuple[int, ...]
    F: int
    seed: int | None = None
    forced: bool = False
    schedule: ParamSchedule | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(int(x) for x in self.levels))
        for u, lv in enumerate(self.levels):
            if not 0 <= lv <= self.F:
                raise ValueError(f"level {lv} of vertex {u} outside [0, {self.F}]")

    @classmethod
    def forced_levels(cls, levels: Sequence[int], F: int, schedule: ParamSchedule | None = None) -> "LevelAssignment":
        """Explicit level table (no sampling)."""
        return cls(tuple(levels), F, None, True, schedule)

    @property
    def n(self) -> int:
        return len(self.levels)

    def members(self, j: int) -> list[int]:
        return [u for u, lv in enumerate(self.levels) if lv >= j]

    def sizes(self) -> list[int]:
        """``|A_0|, ..., |A_F|``."""
        counts = np.bincount(np.asarray(self.levels, dtype=np.int64), minlength=self.F + 1)
        return [int(x) for x in np.cumsum(counts[::-1])[::-1]]

    @property
    def top_empty(self) -> bool:
        """Whether ``A_F`` is empty."""
        return all(lv < self.F for lv in self.levels)

    def to_dict(self) -> dict:
        d = {"seed": self.seed, "F": self.F, "forced": self.forced, "levels": list(self.levels)}
        if self.schedule is not None:
            d["schedule"] = self.schedule.to_dict()
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "LevelAssignment":
        sched = ParamSchedule.from_dict(d["schedule"]) if d.get("schedule") else None
        return cls(tuple(d["levels"]), d["F"], d.get("seed"), bool(d.get("forced", False)), sched)

    @classmethod
    def from_json(cls, text: str) -> "LevelAssignment":
        return cls.from_dict(json.loads(text))


def level_uniforms(seed: int, j: int, n: int) -> np.ndarray:
    """The ``n`` uniforms that decide promotions out of level ``j``.

    Each level has its own Philox stream keyed by ``(seed, j)``; vertex ``u``
    always reads draw ``u``, so decisions do not depend on visiting order.
    """
    ss = np.random.SeedSequence([int(seed), int(j)])
    return np.random.Generator(np.random.Philox(ss)).random(n)


def sample_levels(g: Graph | int, sched: ParamSchedule, seed: int) -> LevelAssignment:
    """Promote each vertex of ``A_j`` into ``A_{j+1}`` with probability ``n^(-λ_j/k)``."""
    n = g if isinstance(g, int) else g.n
    probs = sched.probabilities(n)
    levels = np.zeros(n, dtype=np.int64)
    alive = np.ones(n, dtype=bool)
    for j, p in enumerate(probs):
        hit = level_uniforms(seed, j, n) < p
        alive &= hit
        levels += alive
    return LevelAssignment(tuple(int(x) for x in levels), sched.F, int(seed), False, sched)


@dataclass(frozen=True)
class PivotTable:
    """Nearest ``A_j`` vertex for every level ``j = 0..F``; ``-1`` / inf when ``A_j`` is empty."""

    pivot: tuple[tuple[int, ...], ...]
    dist: tuple[tuple[float, ...], ...]
    F: int

    def p(self, j: int, u: int) -> int:
        return self.pivot[j][u] if j <= self.F else -1

    def d(self, j: int, u: int) -> float:
        """``d(u, p_j(u))``, infinite when undefined."""
        return self.dist[j][u] if j <= self.F else INF

    def threshold(self, u: int, j: int) -> float:
        """Bunch radius of ``B_j(u)``: ``d(u, p_{j+1}(u))``.

        Levels ``F-1`` and ``F`` are unbounded, so ``B_{F-1}(u) = A_{F-1}``
        whether or not the sampled ``A_F`` happens to be empty.
        """
        if j + 1 >= self.F:
            return INF
        return self.dist[j + 1][u]


def compute_pivots(g: Graph, la: LevelAssignment) -> PivotTable:
    if la.n != g.n:
        raise ValueError("level assignment and graph disagree on n")
    piv, dist = [], []
    for j in range(la.F + 1):
        srcs = la.members(j)
        if srcs:
            d, p = multi_source_dijkstra(g, srcs)
        else:
            d, p = [INF] * g.n, [-1] * g.n
        piv.append(tuple(p))
        dist.append(tuple(d))
    return PivotTable(tuple(piv), tuple(dist), la.F)


@dataclass(frozen=True)
class Bunch:
    owner: int
    level: int
    members: dict  # vertex -> distance from owner
    half: bool = False

    def __contains__(self, v: int) -> bool:
        return v in self.members

    def __len__(self) -> int:
        return len(self.members)


def bunch_levels(la: LevelAssignment, f, u: int) -> range:
    """Levels ``j in [i(u), f(i(u))]`` at which ``u`` keeps a bunch (capped at ``F``)."""
    i = la.levels[u]
    return range(i, min(f(i), la.F) + 1)


def compute_bunch(g: Graph, la: LevelAssignment, pt: PivotTable, u: int, j: int, half: bool = False) -> Bunch:
    """``B_j(u)`` (or the half bunch) by a search truncated at the threshold."""
    if not 0 <= j <= la.F:
        raise ValueError(f"bunch level {j} outside [0, {la.F}]")
    thr = pt.threshold(u, j)
    if half:
        thr = thr / 2
    reach = bounded_distances(g, u, thr, strict=True)
    lv = la.levels
    return Bunch(u, j, {v: d for v, d in sorted(reach.items()) if lv[v] >= j}, half)


def owner_bunches(g: Graph, la: LevelAssignment, pt: PivotTable, f, u: int, half: bool = False) -> list[Bunch]:
    """All bunches of ``u`` from a single truncated search."""
    levels = bunch_levels(la, f, u)
    thrs = [pt.threshold(u, j) / (2 if half else 1) for j in levels]
    if not thrs:
        return []
    reach = bounded_distances(g, u, max(thrs), strict=True)
    lv = la.levels
    out = []
    for j, thr in zip(levels, thrs):
        mem = {v: d for v, d in sorted(reach.items()) if lv[v] >= j and d < thr}
        out.append(Bunch(u, j, mem, half))
    return out


def score(g: Graph, la: LevelAssignment, pt: PivotTable, radii: Sequence, u: int, f=None) -> int:
    """``max{i > 0 : d(u,p_i(u)) > r_i and d(u,p_j(u)) <= r_j for j in [f⁻¹(i-1), i-1]}``.

    ``d(u, p_F(u))`` is treated as infinite. Comparisons are exact when the
    distances are integers and the radii fractions.
    """
    if f is None:
        if la.schedule is None:
            raise ValueError("score needs the level function")
        f = la.schedule.f
    F = la.F

    def dist(j: int):
        return INF if j >= F else pt.d(j, u)

    best = 0
    for i in range(1, F + 1):
        lo = f.inverse(i - 1)
        assert lo <= i - 1, "empty score window"
        if _gt(dist(i), radii[i]) and all(not _gt(dist(j), radii[j]) for j in range(lo, i)):
            best = i
    if best == 0:
        raise AssertionError(f"score of vertex {u} undefined")
    return best


def _gt(d, r) -> bool:
    """``d > r`` compared exactly (floats convert to fractions without rounding)."""
    if r == INF:
        return False
    if d == INF:
        return True
    return Fraction(d) > Fraction(r)
