"""Hopset assembly from pivots and bunches."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .core import LevelAssignment, PivotTable, compute_pivots, owner_bunches, sample_levels
from .graph import AugmentedGraph, Graph, format_weight
from .schedule import ParamSchedule

Provenance = tuple[str, int]  # ("pivot", j) or ("bunch", j)


@dataclass(frozen=True)
class HopsetEdgeSet:
    """Weighted shortcut edges ``(x, y, d_G(x,y))`` with the reasons each was added."""

    n: int
    edges: tuple[tuple[int, int, float], ...]
    provenance: tuple[frozenset, ...]
    schedule: ParamSchedule | None = None
    levels: LevelAssignment | None = field(default=None, compare=False, repr=False)

    @property
    def seed(self) -> int | None:
        return None if self.levels is None else self.levels.seed

    def __len__(self) -> int:
        return len(self.edges)

    def pairs(self) -> set[tuple[int, int]]:
        return {(x, y) for x, y, _ in self.edges}

    def weight_map(self) -> dict[tuple[int, int], float]:
        return {(x, y): w for x, y, w in self.edges}

    def augmented(self, g: Graph) -> AugmentedGraph:
        return AugmentedGraph(g, self.edges)

    def header(self) -> dict:
        d = {"kind": "hopset", "n": self.n, "seed": self.seed, "stats": hopset_size_stats(self).to_dict()}
        if self.schedule is not None:
            d["schedule"] = self.schedule.to_dict()
        if self.levels is not None:
            d["levels"] = self.levels.to_dict()
        return d

    def to_text(self) -> str:
        lines = ["# " + json.dumps(self.header(), sort_keys=True)]
        for (x, y, w), prov in zip(self.edges, self.provenance):
            tag = ",".join(f"{kind}:{j}" for kind, j in sorted(prov))
            lines.append(f"{x} {y} {format_weight(w)} {tag}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "HopsetEdgeSet":
        header: dict = {}
        edges, prov = [], []
        for raw in text.splitlines():
            if raw.startswith("#"):
                if not header:
                    header = json.loads(raw[1:])
                continue
            parts = raw.split()
            if not parts:
                continue
            if len(parts) != 4:
                raise ValueError(f"bad hopset line {raw!r}")
            w = float(parts[2])
            edges.append((int(parts[0]), int(parts[1]), int(w) if w.is_integer() else w))
            tags = set()
            for tag in parts[3].split(","):
                kind, _, j = tag.partition(":")
                tags.add((kind, int(j)))
            prov.append(frozenset(tags))
        if header.get("kind") != "hopset":
            raise ValueError("missing hopset header")
        sched = ParamSchedule.from_dict(header["schedule"]) if "schedule" in header else None
        la = LevelAssignment.from_dict(header["levels"]) if "levels" in header else None
        return cls(header["n"], tuple(edges), tuple(prov), sched, la)


def build_hopset(
    g: Graph,
    sched: ParamSchedule,
    seed: int | None = None,
    levels: LevelAssignment | None = None,
) -> HopsetEdgeSet:
    """Pivot edges ``(u, p_j(u))`` for ``j < F`` plus bunch edges for ``j in [i(u), f(i(u))]``.

    Either ``seed`` (sampled levels) or an explicit ``levels`` table is used.
    """
    if sched.variant != "hopset":
        raise ValueError("build_hopset needs a hopset-variant schedule")
    if levels is None:
        if seed is None:
            raise ValueError("give a seed or a level assignment")
        levels = sample_levels(g, sched, seed)
    elif levels.F != sched.F or levels.n != g.n:
        raise ValueError("level assignment does not match graph/schedule")
    pt = compute_pivots(g, levels)
    return assemble_hopset(g, sched, levels, pt)


def assemble_hopset(g: Graph, sched: ParamSchedule, la: LevelAssignment, pt: PivotTable) -> HopsetEdgeSet:
    merged: dict[tuple[int, int], list] = {}

    def add(x: int, y: int, w, tag: Provenance) -> None:
        if x == y:
            return
        key = (x, y) if x < y else (y, x)
        slot = merged.get(key)
        if slot is None:
            merged[key] = [w, {tag}]
        else:
            slot[1].add(tag)

    for u in range(g.n):
        for j in range(sched.F):
            x = pt.p(j, u)
            if x >= 0:
                add(u, x, pt.d(j, u), ("pivot", j))
        for b in owner_bunches(g, la, pt, sched.f, u):
            for v, d in b.members.items():
                add(u, v, d, ("bunch", b.level))
    keys = sorted(merged)
    edges = tuple((x, y, merged[(x, y)][0]) for x, y in keys)
    prov = tuple(frozenset(merged[key][1]) for key in keys)
    return HopsetEdgeSet(g.n, edges, prov, sched, la)


@dataclass(frozen=True)
class SizeReport:
    total: int
    pivot_only: int
    bunch_only: int
    both: int
    per_level: dict
    reference: float  # F²·n^(1+1/k)
    linear_reference: float | None  # k·n^(1+1/k) for linear f

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "pivot_only": self.pivot_only,
            "bunch_only": self.bunch_only,
            "pivot_and_bunch": self.both,
            "per_level": {str(k): v for k, v in sorted(self.per_level.items())},
            "F2_n_pow": self.reference,
            "k_n_pow": self.linear_reference,
            "ratio": self.total / self.reference if self.reference else 0.0,
        }


def hopset_size_stats(h: HopsetEdgeSet) -> SizeReport:
    """Counts per provenance class and per level, with reference sizes."""
    pivot_only = bunch_only = both = 0
    per_level: dict[int, int] = {}
    for prov in h.provenance:
        kinds = {kind for kind, _ in prov}
        if kinds == {"pivot"}:
            pivot_only += 1
        elif kinds == {"bunch"}:
            bunch_only += 1
        else:
            both += 1
        # attribute each edge to its lowest level so the counts sum to the total
        lvl = min(j for _, j in prov)
        per_level[lvl] = per_level.get(lvl, 0) + 1
    ref = lin = None
    if h.schedule is not None and h.n > 0:
        s = h.schedule
        pw = h.n ** (1 + 1 / s.k)
        ref = s.F ** 2 * pw
        if s.f.kind == "linear":
            lin = s.k * pw
    return SizeReport(len(h.edges), pivot_only, bunch_only, both, per_level, ref or 0.0, lin)


def size_envelope(n: int, k: int) -> float:
    """``log₂k · n^(1+1/k)``, the reference size for the identity schedule."""
    return max(math.log2(k), 1.0) * n ** (1 + 1 / k)
