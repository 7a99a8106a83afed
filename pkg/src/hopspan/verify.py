"""Measured stretch and hopbound, plus constructive path certificates."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .core import LevelAssignment, PivotTable, score
from .graph import INF, AugmentedGraph, Graph, all_pairs_distances, dijkstra, iter_hop_rounds, shortest_path_vertices
from .hopset import HopsetEdgeSet
from .schedule import ParamSchedule
from .spanner import SpannerEdgeSet

EXHAUSTIVE_LIMIT = 300
REL_TOL = 1e-9


@dataclass
class VerificationReport:
    kind: str  # "hopset" or "spanner"
    alpha: float
    beta: float  # hop budget for hopsets, additive term for spanners
    passed: bool
    pairs_checked: int
    pairs_skipped: int  # disconnected
    violations: int
    max_stretch: float
    worst_pair: tuple[int, int] | None
    worst_excess: float = 0.0
    histogram: dict = field(default_factory=dict)
    exhaustive: bool = True
    lower_bound_violations: int = 0
    rows: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("rows")
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, default=_jsonable)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["u", "v", "d", "d_approx", "ratio"])
        for row in self.rows:
            w.writerow(row)
        return buf.getvalue()


def _jsonable(x):
    if isinstance(x, Fraction):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    raise TypeError(type(x))


_BINS = (1.0, 1.5, 2.0, 3.0, 5.0, 10.0)


def _histogram(ratios: np.ndarray) -> dict:
    out = {}
    edges = list(_BINS) + [math.inf]
    lo = -math.inf
    for hi in edges:
        label = f"<={hi:g}" if math.isfinite(hi) else f">{_BINS[-1]:g}"
        out[label] = int(np.sum((ratios > lo) & (ratios <= hi)))
        lo = hi
    return out


def _extra_edges(h) -> tuple:
    if isinstance(h, HopsetEdgeSet):
        return h.edges
    return tuple(h)


def _le(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``a <= b`` up to float rounding in ``b``."""
    return a <= b + REL_TOL * np.maximum(1.0, np.abs(b))


def _pair_plan(g: Graph, pairs, seed: int, sample_sources: int, sample_pairs: int):
    """Sources to expand and a per-source target mask."""
    n = g.n
    if pairs == "all" or pairs is None:
        if n <= EXHAUSTIVE_LIMIT:
            return list(range(n)), None, True
        rng = np.random.default_rng(seed)
        srcs = sorted(rng.choice(n, size=min(n, sample_sources), replace=False).tolist())
        dist = all_pairs_distances(g, srcs)
        mask = np.zeros_like(dist, dtype=bool)
        finite = np.isfinite(dist) & (dist > 0)
        vals = dist[finite]
        if len(vals):
            # stratify by distance decile
            cuts = np.quantile(vals, np.linspace(0, 1, 11))
            per = max(1, sample_pairs // 10)
            idx = np.argwhere(finite)
            dv = dist[finite]
            for q in range(10):
                sel = (dv >= cuts[q]) & ((dv < cuts[q + 1]) if q < 9 else (dv <= cuts[q + 1]))
                cand = idx[sel]
                if len(cand) > per:
                    cand = cand[rng.choice(len(cand), size=per, replace=False)]
                mask[cand[:, 0], cand[:, 1]] = True
        return srcs, mask, False
    by_src: dict[int, set] = {}
    for u, v in pairs:
        by_src.setdefault(int(u), set()).add(int(v))
    srcs = sorted(by_src)
    mask = np.zeros((len(srcs), n), dtype=bool)
    for r, s in enumerate(srcs):
        mask[r, sorted(by_src[s])] = True
    return srcs, mask, False


def verify_hopset(
    g: Graph,
    h,
    alpha,
    beta: int,
    pairs="all",
    seed: int = 0,
    keep_rows: bool = False,
    sample_sources: int = 64,
    sample_pairs: int = 2000,
    batch: int = 128,
) -> VerificationReport:
    """Check ``d_G <= d^(β)_{G∪H} <= α·d_G`` over the selected pairs."""
    if beta < 1:
        raise ValueError("beta must be >= 1")
    ag = AugmentedGraph(g, _extra_edges(h))
    srcs, mask, exhaustive = _pair_plan(g, pairs, seed, sample_sources, sample_pairs)
    alpha_f = float(alpha)
    checked = skipped = bad = lower_bad = 0
    worst, worst_ratio, worst_excess = None, 0.0, 0.0
    all_ratios, rows = [], []
    for lo in range(0, len(srcs), batch):
        chunk = srcs[lo : lo + batch]
        dist = all_pairs_distances(g, chunk)
        approx = _rows_at(ag, chunk, beta)
        sel = np.ones_like(dist, dtype=bool) if mask is None else mask[lo : lo + batch]
        sel = sel.copy()
        sel[np.arange(len(chunk)), chunk] = False
        if exhaustive:
            # each unordered pair once
            sel &= np.arange(g.n)[None, :] > np.asarray(chunk)[:, None]
        disc = sel & ~np.isfinite(dist)
        skipped += int(disc.sum())
        sel &= np.isfinite(dist)
        d = dist[sel]
        a = approx[sel]
        checked += len(d)
        lower_bad += int(np.sum(a < d - REL_TOL * np.maximum(1.0, d)))
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = np.where(d > 0, a / np.where(d > 0, d, 1), np.where(a > 0, np.inf, 1.0))
        ok = _le(a, alpha_f * d)
        bad += int((~ok).sum())
        all_ratios.append(ratio)
        if len(ratio):
            r = int(np.argmax(ratio))
            if ratio[r] > worst_ratio or worst is None:
                worst_ratio = float(ratio[r])
                rr, cc = np.argwhere(sel)[r]
                worst = (int(chunk[rr]), int(cc))
                worst_excess = float(a[r] - alpha_f * d[r])
        if keep_rows:
            for (rr, cc), dv, av, rv in zip(np.argwhere(sel), d, a, ratio):
                rows.append((int(chunk[rr]), int(cc), float(dv), float(av), float(rv)))
    ratios = np.concatenate(all_ratios) if all_ratios else np.zeros(0)
    return VerificationReport(
        "hopset", alpha_f, beta, bad == 0 and lower_bad == 0, checked, skipped, bad,
        worst_ratio if checked else 1.0, worst, worst_excess, _histogram(ratios), exhaustive, lower_bad, rows,
    )


def _rows_at(ag: AugmentedGraph, sources, beta: int) -> np.ndarray:
    mat = None
    for h, m in iter_hop_rounds(ag, sources):
        mat = m
        if h >= beta:
            break
    return mat


def verify_spanner(g: Graph, s, mult, add, keep_rows: bool = False) -> VerificationReport:
    """All-pairs check of ``d_S <= mult·d_G + add``."""
    if isinstance(s, SpannerEdgeSet):
        edges = s.edges
    else:
        edges = [(u, v) for u, v, _ in s.edges]
    for u, v in edges:
        if not g.has_edge(u, v):
            raise ValueError(f"spanner edge ({u},{v}) is not an edge of the graph")
    sub = s.subgraph(g) if isinstance(s, SpannerEdgeSet) else s
    if sub.n != g.n:
        raise ValueError("spanner and graph disagree on n")
    dg = all_pairs_distances(g)
    ds = all_pairs_distances(sub)
    iu = np.triu_indices(g.n, k=1)
    d, a = dg[iu], ds[iu]
    fin = np.isfinite(d)
    skipped = int((~fin).sum())
    d, a = d[fin], a[fin]
    us, vs = iu[0][fin], iu[1][fin]
    bound = float(mult) * d + float(add)
    ok = _le(a, bound)
    excess = a - bound
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(d > 0, a / np.where(d > 0, d, 1), 1.0)
    worst = None
    worst_excess = 0.0
    if len(d):
        r = int(np.argmax(excess))
        worst = (int(us[r]), int(vs[r]))
        worst_excess = float(excess[r])
    rows = []
    if keep_rows:
        rows = [(int(x), int(y), float(p), float(q), float(z)) for x, y, p, q, z in zip(us, vs, d, a, ratio)]
    bad = int((~ok).sum())
    return VerificationReport(
        "spanner", float(mult), float(add), bad == 0, int(len(d)), skipped, bad,
        float(ratio.max()) if len(ratio) else 1.0, worst, worst_excess, _histogram(ratio), True, 0, rows,
    )


def measure_min_hopbound(g: Graph, h, alpha, pairs: Iterable[tuple[int, int]] | None = None, batch: int = 256) -> int | None:
    """Smallest β with ``d^(β) <= α·d`` on every selected connected pair.

    Budgets are scanned upward one relaxation round at a time, which visits
    the same monotone predicate a binary search would, at the cost of one
    sweep. Returns ``None`` when even unlimited hops do not reach ``α``.
    """
    if float(alpha) < 1:
        raise ValueError("alpha must be >= 1")
    ag = AugmentedGraph(g, _extra_edges(h))
    if pairs is None:
        srcs, mask = list(range(g.n)), None
    else:
        srcs, mask, _ = _pair_plan(g, list(pairs), 0, 0, 0)
    best = 1
    alpha_f = float(alpha)
    for lo in range(0, len(srcs), batch):
        chunk = srcs[lo : lo + batch]
        dist = all_pairs_distances(g, chunk)
        sel = np.isfinite(dist) if mask is None else (mask[lo : lo + batch] & np.isfinite(dist))
        sel = sel.copy()
        sel[np.arange(len(chunk)), chunk] = False
        if not sel.any():
            continue
        d = dist[sel]
        target = np.full_like(d, np.inf) if math.isinf(alpha_f) else alpha_f * d
        found = None
        last_h = 0
        for hcount, mat in iter_hop_rounds(ag, chunk):
            last_h = hcount
            if hcount == 0:
                continue
            a = mat[sel]
            ok = (a < np.inf) if math.isinf(alpha_f) else _le(a, target)
            if ok.all():
                found = hcount
                break
        if found is None:
            return None
        best = max(best, found)
        del last_h
    return best


# --- constructive certificates ----------------------------------------------


@dataclass
class JumpCertificate:
    u: int
    v: int
    hops: list  # vertex sequence in G ∪ H
    weight: Fraction
    hop_count: int
    weight_bound: Fraction
    hop_bound: int
    segments: list = field(default_factory=list)  # (head, score, segment length)
    diagnostic: str | None = None

    @property
    def valid(self) -> bool:
        return self.diagnostic is None and self.weight <= self.weight_bound and self.hop_count <= self.hop_bound


class _EdgeOracle:
    """Edge lookups in ``G ∪ H`` with hopset weights re-derived from ``G``."""

    def __init__(self, g: Graph, h):
        self.g = g
        self.h = {}
        for x, y, w in _extra_edges(h):
            key = (x, y) if x < y else (y, x)
            self.h[key] = min(w, self.h.get(key, INF))
        self._rows: dict[int, list] = {}

    def dist(self, x: int, y: int):
        if x not in self._rows:
            self._rows[x] = dijkstra(self.g, x).dist
        return self._rows[x][y]

    def weight(self, x: int, y: int):
        """Lightest ``x-y`` edge weight or ``None``; raises if a hopset weight is wrong."""
        key = (x, y) if x < y else (y, x)
        best = None
        if self.g.has_edge(x, y):
            best = self.g.weight(x, y)
        if key in self.h:
            w = self.h[key]
            if w != self.dist(x, y):
                raise AssertionError(f"hopset edge {key} has weight {w} but distance {self.dist(x, y)}")
            best = w if best is None else min(best, w)
        return best


def trace_jump_path(g: Graph, h, sched: ParamSchedule, la: LevelAssignment, pt: PivotTable, u: int, v: int, t=None) -> JumpCertificate:
    """Rebuild the explicit low-hop ``u-v`` path used by the stretch argument.

    The canonical shortest path is cut into segments. At a segment head of
    score ``i`` the walk jumps to the farthest path vertex within
    ``(r_i - r_{i-1})/2 - r_{f⁻¹(i-1)}`` through
    ``head -> p_{f⁻¹(i-1)}(head) -> p_{i-1}(target) -> target`` and then takes
    one graph edge. Radii are rescaled per pair to ``t·d(u,v)·r_i / (4 r_F)``,
    giving weight ``<= (2t+3)·d(u,v)`` and at most ``⌈4 r_F⌉ + 3`` hops.
    """
    t = Fraction(sched.t if t is None else t)
    s = sched.with_t(t)
    hop_bound = s.hop_budget
    oracle = _EdgeOracle(g, h)
    path = shortest_path_vertices(g, u, v)
    if path is None:
        raise ValueError(f"vertices {u} and {v} are not connected")
    pre = [Fraction(0)]
    for a, b in zip(path, path[1:]):
        pre.append(pre[-1] + Fraction(g.weight(a, b)))
    D = len(path) - 1
    duv = pre[-1]
    bound = (2 * t + 3) * duv
    cert = JumpCertificate(u, v, [u], Fraction(0), 0, bound, hop_bound)
    if D == 0:
        return cert
    scale = t * duv / (4 * s.rF)
    r = [ri * scale for ri in s.radii]
    f = s.f

    def hop(x: int, y: int, step: str) -> bool:
        if x == y:
            return True
        w = oracle.weight(x, y)
        if w is None:
            cert.diagnostic = f"missing edge ({x},{y}) for {step}"
            return False
        cert.hops.append(y)
        cert.weight += Fraction(w)
        cert.hop_count += 1
        return True

    def jump(a: int, b: int, i: int) -> bool:
        if a == b:
            return True
        lo = f.inverse(i - 1)
        x0 = pt.p(lo, a)
        y0 = pt.p(i - 1, b)
        return (
            hop(a, x0, f"pivot edge (u, p_{lo}(u)) at u={a}")
            and hop(x0, y0, f"bunch edge (p_{lo}(u), p_{i - 1}(u')) with u={a}, u'={b}")
            and hop(y0, b, f"pivot edge (u', p_{i - 1}(u')) at u'={b}")
        )

    j = 0
    while True:
        head = path[j]
        i = score(g, la, pt, r, head, f)
        lo = f.inverse(i - 1)
        reach = (r[i] - r[i - 1]) / 2 - r[lo]
        l = j
        while l < D and pre[l + 1] - pre[j] <= reach:
            l += 1
        if l == D:
            cert.segments.append((head, i, float(pre[D] - pre[j])))
            if not jump(head, path[D], i):
                return cert
            break
        if not jump(head, path[l], i):
            return cert
        if not hop(path[l], path[l + 1], f"path edge ({path[l]},{path[l + 1]})"):
            return cert
        seg = pre[l + 1] - pre[j]
        cert.segments.append((head, i, float(seg)))
        if seg < 4 / t * r[lo]:
            cert.diagnostic = f"segment from {head} shorter than (4/t)·r_{lo}"
            return cert
        j = l + 1
    return cert


@dataclass
class ShortcutCertificate:
    x: int
    y: int
    level: int  # i*
    via: int
    weight: float
    bound: float
    diagnostic: str | None = None

    @property
    def valid(self) -> bool:
        return self.diagnostic is None and self.weight <= self.bound


NOT_APPLICABLE = "not applicable"


def trace_low_level_shortcut(g: Graph, h, la: LevelAssignment, pt: PivotTable, x: int, y: int, c: int):
    """Two-hop path through the first pivot that lands in the other endpoint's bunch.

    Applies when ``d(x, p_c(x)) > c·d(x,y)``; otherwise returns ``NOT_APPLICABLE``.
    """
    oracle = _EdgeOracle(g, h)
    dxy = oracle.dist(x, y)
    if x == y or dxy == INF or not pt.d(c, x) > c * dxy:
        return NOT_APPLICABLE
    for i in range(0, c + 1):
        px, py = pt.p(i, x), pt.p(i, y)
        cand = []
        if px >= 0 and oracle.dist(y, px) < pt.threshold(y, i):
            cand.append(px)
        if py >= 0 and oracle.dist(x, py) < pt.threshold(x, i):
            cand.append(py)
        if not cand:
            continue
        via = cand[0]
        total = 0
        diag = None
        if i >= c:
            diag = f"first shared level {i} is not below c={c}"
        for a, b in ((x, via), (via, y)):
            if a == b:
                continue
            w = oracle.weight(a, b)
            if w is None:
                diag = diag or f"missing edge ({a},{b}) at level {i}"
                w = oracle.dist(a, b)
            total += w
        return ShortcutCertificate(x, y, i, via, total, (2 * c + 1) * dxy, diag)
    return ShortcutCertificate(x, y, -1, -1, INF, (2 * c + 1) * dxy, "no level with a shared pivot")
