"""Hopset size against the F²·n^(1+1/k) and log k envelopes over several schedules."""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass

import numpy as np

from hopspan import ParamSchedule, build_hopset, random_graph
from hopspan.schedule import parse_level_function


@dataclass
class SweepConfig:
    schedules: tuple[str, ...] = ("linear@3", "identity@4", "identity@8", "interleaved:2@8")
    sizes: tuple[int, ...] = (128, 256, 512)
    seeds: int = 20
    degree: int = 4


def run(cfg: SweepConfig, out) -> None:
    w = csv.writer(out)
    w.writerow(["schedule", "k", "F", "n", "mean_size", "se", "F2_envelope", "logk_envelope", "ratio_logk"])
    for label in cfg.schedules:
        fkind, _, k = label.rpartition("@")
        k = int(k)
        sched = ParamSchedule.make(k, parse_level_function(fkind, k))
        for n in cfg.sizes:
            sizes = np.array(
                [len(build_hopset(random_graph(n, cfg.degree * n, s), sched, seed=s)) for s in range(cfg.seeds)],
                dtype=float,
            )
            mean = sizes.mean()
            se = sizes.std(ddof=1) / math.sqrt(len(sizes)) if len(sizes) > 1 else 0.0
            base = n ** (1 + 1 / k)
            logk = max(math.log2(k), 1.0) * base
            w.writerow([label, k, sched.F, n, f"{mean:.1f}", f"{se:.2f}", f"{sched.F ** 2 * base:.0f}", f"{logk:.0f}",
                        f"{mean / logk:.4f}"])
            out.flush()


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--schedule", action="append", help="FKIND@K (repeatable)")
    ap.add_argument("--n", type=int, action="append", help="graph size (repeatable)")
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--degree", type=int, default=4, help="edges per vertex")
    args = ap.parse_args()
    cfg = SweepConfig(seeds=args.seeds, degree=args.degree)
    if args.schedule:
        cfg.schedules = tuple(args.schedule)
    if args.n:
        cfg.sizes = tuple(args.n)
    run(cfg, sys.stdout)


if __name__ == "__main__":
    main()
