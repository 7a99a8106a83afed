"""Spanner sizes and measured (mult, add) slack for both constructions across t."""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from fractions import Fraction

from hopspan import ParamSchedule, build_spanner_half, build_spanner_truncated, random_graph, verify_spanner


@dataclass
class SpannerConfig:
    n: int = 200
    m: int = 800
    k: int = 4
    f: str = "identity"
    ts: tuple[str, ...] = ("1/4", "1", "4", "16")
    seeds: int = 5


def run(cfg: SpannerConfig, out) -> None:
    w = csv.writer(out)
    w.writerow(["variant", "t", "seed", "n", "m", "edges", "mult", "add", "passed", "max_stretch", "worst_excess"])
    half = ParamSchedule.make(cfg.k, cfg.f, variant="spanner-half")
    for seed in range(cfg.seeds):
        g = random_graph(cfg.n, cfg.m, seed, weighted=False)
        s_half = build_spanner_half(g, half, seed=seed)
        for ts in cfg.ts:
            t = Fraction(ts)
            trunc = ParamSchedule.make(cfg.k, cfg.f, t=t, variant="spanner-truncated")
            s_trunc = build_spanner_truncated(g, trunc, seed=seed)
            for name, s, sched in (("truncated", s_trunc, trunc), ("half", s_half, half.with_t(t))):
                rep = verify_spanner(g, s, t + 3, 4 * sched.rF)
                w.writerow([name, ts, seed, g.n, g.m, len(s), f"{float(t + 3):g}", f"{float(4 * sched.rF):.4g}",
                            rep.passed, f"{rep.max_stretch:.4f}", f"{rep.worst_excess:.4g}"])
            out.flush()


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--m", type=int, default=800)
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--f", default="identity")
    ap.add_argument("--t", action="append", help="stretch parameter (repeatable, fractions allowed)")
    ap.add_argument("--seeds", type=int, default=5)
    args = ap.parse_args()
    cfg = SpannerConfig(args.n, args.m, args.k, args.f, seeds=args.seeds)
    if args.t:
        cfg.ts = tuple(args.t)
    run(cfg, sys.stdout)


if __name__ == "__main__":
    main()
