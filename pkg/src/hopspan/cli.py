"""Command-line entry point: build, verify, gen, bench, trace, replay.

Exit codes: 0 pass, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .core import compute_pivots
from .graph import Graph, format_edge_list, random_graph, read_edge_list
from .hopset import HopsetEdgeSet, build_hopset, hopset_size_stats
from .lowerbound import build_tower_graph, get_cage, random_regular_high_girth
from .schedule import ParamSchedule, parse_level_function
from .spanner import SpannerEdgeSet, build_spanner_half, build_spanner_truncated
from .verify import measure_min_hopbound, trace_jump_path, verify_hopset, verify_spanner

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_BUILD_VARIANTS = {"hopset": "hopset", "spanner-trunc": "spanner-truncated", "spanner-half": "spanner-half"}


class UsageError(Exception):
    """Bad input: reported on stderr with exit code 2."""


@dataclass
class RunConfig:
    """Everything needed to rerun a command; stored alongside its outputs."""

    subcommand: str
    target: str | None = None
    options: dict = field(default_factory=dict)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        opts = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command", "target")}
        return cls(args.command, getattr(args, "target", None), opts)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        return cls(d["subcommand"], d.get("target"), dict(d.get("options", {})))

    def to_argv(self) -> list[str]:
        argv = []
        threads = self.options.get("threads")
        if threads is not None:
            argv += ["--threads", str(threads)]
        argv.append(self.subcommand)
        if self.target is not None:
            argv.append(self.target)
        for key, val in self.options.items():
            if key == "threads" or val is None or val is False:
                continue
            flag = "--" + key.replace("_", "-")
            if val is True:
                argv.append(flag)
            elif isinstance(val, list):
                for item in val:
                    argv += [flag, str(item)]
            else:
                argv += [flag, str(val)]
        return argv


# --- helpers ---------------------------------------------------------------


def _load_graph(path: str) -> Graph:
    try:
        return read_edge_list(path)
    except FileNotFoundError:
        raise UsageError(f"input file not found: {path}")
    except ValueError as exc:
        raise UsageError(f"cannot parse {path}: {exc}")


def _read_text(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except FileNotFoundError:
        raise UsageError(f"file not found: {path}")


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_jsonable) + "\n"


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.integer, np.floating)):
        return x.item()
    if isinstance(x, (set, frozenset, tuple)):
        return sorted(x) if isinstance(x, (set, frozenset)) else list(x)
    raise TypeError(f"not serializable: {type(x).__name__}")


def _schedule(args, variant: str) -> ParamSchedule:
    try:
        t = Fraction(args.t)
        sched = ParamSchedule.make(args.k, parse_level_function(args.f, args.k), t=t, variant=variant)
        sched.validate()
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"infeasible schedule: {exc}")
    return sched


def _echo_schedule(sched: ParamSchedule, out=None) -> None:
    out = out or sys.stdout
    lam = " ".join(str(x) for x in sched.lambdas)
    radii = " ".join(f"{float(r):.6g}" for r in sched.radii)
    print(f"schedule {sched.variant} k={sched.k} f={sched.f} t={sched.t}", file=out)
    print(f"F = {sched.F}", file=out)
    print(f"lambda = {lam}", file=out)
    print(f"r = {radii}", file=out)


def _load_artifact(text: str):
    first = next((ln for ln in text.splitlines() if ln.startswith("# {")), None)
    if first is None:
        raise UsageError("artifact has no JSON header")
    kind = json.loads(first[1:]).get("kind")
    try:
        if kind == "hopset":
            return HopsetEdgeSet.from_text(text)
        if kind == "spanner":
            return SpannerEdgeSet.from_text(text)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad artifact: {exc}")
    raise UsageError(f"unknown artifact kind {kind!r}")


def _pool_map(fn, items, threads: int):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


# --- build -----------------------------------------------------------------


def cmd_build(args) -> int:
    variant = _BUILD_VARIANTS[args.target]
    sched = _schedule(args, variant)
    to_stdout = args.output in (None, "-")
    _echo_schedule(sched, sys.stderr if to_stdout else sys.stdout)
    if args.input is None:
        if args.output is None and args.stats is None:
            return EXIT_OK  # schedule echo only
        raise UsageError("--input is required to build")
    g = _load_graph(args.input)
    try:
        if variant == "hopset":
            art = build_hopset(g, sched, seed=args.seed)
            text, stats = art.to_text(), hopset_size_stats(art).to_dict()
        elif variant == "spanner-truncated":
            art = build_spanner_truncated(g, sched, seed=args.seed)
            text, stats = art.to_text(g), art.stats()
        else:
            art = build_spanner_half(g, sched, seed=args.seed)
            text, stats = art.to_text(g), art.stats()
    except ValueError as exc:
        raise UsageError(str(exc))
    _emit(text, args.output)
    if args.stats:
        doc = {"config": RunConfig.from_args(args).to_dict(), "schedule": sched.to_dict(), "stats": stats, "n": g.n, "m": g.m}
        _emit(_dump(doc), args.stats)
    print(f"edges {len(art)}", file=sys.stderr if to_stdout else sys.stdout)
    return EXIT_OK


# --- verify ----------------------------------------------------------------


def cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    art = _load_artifact(_read_text(args.artifact))
    if art.n != g.n:
        raise UsageError(f"graph has {g.n} vertices but the artifact was built for {art.n}")
    sched = art.schedule
    if isinstance(art, HopsetEdgeSet):
        if (args.alpha is None or args.beta is None) and sched is None:
            raise UsageError("artifact has no schedule; pass --alpha and --beta")
        alpha = Fraction(args.alpha) if args.alpha is not None else sched.hopset_stretch
        beta = int(args.beta) if args.beta is not None else sched.hop_budget
        if any(x >= g.n or y >= g.n for x, y, _ in art.edges):
            raise UsageError("hopset mentions vertices outside the graph")
        wrong = art.augmented(g).check_weights(tol=1e-9)
        if wrong:
            raise UsageError(f"hopset does not match graph: edge {wrong[0]} is not a shortest-path weight")
        pairs = "all" if args.pairs == "all" else None
        rep = verify_hopset(g, art, alpha, beta, pairs=pairs, seed=args.seed, keep_rows=bool(args.csv))
    else:
        if (args.alpha is None or args.beta is None) and sched is None:
            raise UsageError("artifact has no schedule; pass --alpha and --beta")
        mult = Fraction(args.alpha) if args.alpha is not None else sched.t + 3
        add = Fraction(args.beta) if args.beta is not None else 4 * sched.rF
        try:
            rep = verify_spanner(g, art, mult, add, keep_rows=bool(args.csv))
        except ValueError as exc:
            raise UsageError(str(exc))
    if args.report:
        _emit(rep.to_json() + "\n", args.report)
    if args.csv:
        _emit(rep.to_csv(), args.csv)
    verdict = "PASS" if rep.passed else "FAIL"
    print(
        f"{verdict} {rep.kind} alpha={rep.alpha:g} beta={rep.beta:g} pairs={rep.pairs_checked} "
        f"violations={rep.violations} max_stretch={rep.max_stretch:.6g}"
    )
    if not rep.passed:
        print(f"worst pair {rep.worst_pair} excess {rep.worst_excess:.6g}")
        return EXIT_FAIL
    return EXIT_OK


# --- gen -------------------------------------------------------------------


def cmd_gen(args) -> int:
    if args.target == "tower":
        try:
            f = parse_level_function(args.f, args.k)
            tg = build_tower_graph(
                args.k, f, Fraction(args.alpha), args.n, towers=args.towers, layer_mult=args.layer_mult, top_size=args.top_size
            )
        except ValueError as exc:
            raise UsageError(str(exc))
        g, side = tg.graph, tg.sidecar()
        side["schedule"] = tg.schedule.to_dict()
    elif args.target == "cage":
        try:
            cage = get_cage(args.name)
        except (KeyError, ValueError) as exc:
            raise UsageError(str(exc))
        g = cage.graph
        side = {"kind": "cage", "name": cage.name, "degree": cage.degree, "girth": cage.girth}
    else:
        try:
            if args.regular is not None:
                g = random_regular_high_girth(args.n, args.regular, args.girth or 3, seed=args.seed)
                side = {"kind": "random-regular", "degree": args.regular, "min_girth": args.girth or 3}
            else:
                m = args.m if args.m is not None else 4 * args.n
                g = random_graph(args.n, m, args.seed, weighted=not args.unweighted, wmax=args.wmax)
                side = {"kind": "random", "weighted": not args.unweighted, "wmax": args.wmax}
        except (ValueError, RuntimeError) as exc:
            raise UsageError(str(exc))
        side["seed"] = args.seed
    side.update({"n": g.n, "m": g.m, "config": RunConfig.from_args(args).to_dict()})
    _emit(format_edge_list(g, header=[json.dumps({"kind": side["kind"], "n": g.n, "m": g.m}, sort_keys=True)]), args.output)
    sidecar = args.sidecar
    if sidecar is None and args.output not in (None, "-"):
        sidecar = args.output + ".json"
    if sidecar:
        _emit(_dump(side), sidecar)
    if args.output not in (None, "-"):
        print(f"{side['kind']} n={g.n} m={g.m}")
    return EXIT_OK


# --- bench -----------------------------------------------------------------


def _parse_bench_schedule(text: str) -> tuple[str, int]:
    """``"identity@8"`` or ``"interleaved:2@8"``."""
    f, sep, k = text.rpartition("@")
    if not sep:
        raise UsageError(f"schedule {text!r} should look like FKIND@K")
    return f, int(k)


def _bench_alphas(token: str, sched: ParamSchedule) -> list[Fraction]:
    if token == "claimed":
        return [sched.hopset_stretch]
    if token == "tz":
        return [Fraction(2 * sched.k - 1)]
    return [Fraction(token)]


BENCH_COLUMNS = ["schedule", "k", "t", "F", "seed", "n", "m", "size", "size_ratio", "alpha", "beta_star"]


def cmd_bench(args) -> int:
    jobs = []
    for text in args.schedule or ["linear@3", "identity@8"]:
        fkind, k = _parse_bench_schedule(text)
        try:
            sched = ParamSchedule.make(k, parse_level_function(fkind, k), t=Fraction(args.t), variant="hopset")
        except ValueError as exc:
            raise UsageError(str(exc))
        for seed in range(args.seed, args.seed + args.seeds):
            jobs.append((text, sched, seed))
    m = args.m if args.m is not None else 4 * args.n

    def run(job):
        text, sched, seed = job
        g = random_graph(args.n, m, seed, weighted=not args.unweighted)
        h = build_hopset(g, sched, seed=seed)
        rep = hopset_size_stats(h)
        rows = []
        for a in args.alpha or ["claimed"]:
            for alpha in _bench_alphas(a, sched):
                beta = measure_min_hopbound(g, h, alpha)
                rows.append([text, sched.k, str(sched.t), sched.F, seed, g.n, g.m, len(h),
                             f"{rep.total / rep.reference:.6f}", str(alpha), "" if beta is None else beta])
        return rows

    lines = [",".join(BENCH_COLUMNS)]
    for rows in _pool_map(run, jobs, args.threads):
        lines += [",".join(str(x) for x in row) for row in rows]
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


# --- trace -----------------------------------------------------------------


def _cert_dict(c) -> dict:
    return {
        "u": c.u, "v": c.v, "valid": c.valid, "hops": c.hops, "hop_count": c.hop_count,
        "weight": str(c.weight), "weight_bound": str(c.weight_bound), "hop_bound": c.hop_bound,
        "segments": c.segments, "diagnostic": c.diagnostic,
    }


def cmd_trace(args) -> int:
    g = _load_graph(args.graph)
    art = _load_artifact(_read_text(args.artifact))
    if not isinstance(art, HopsetEdgeSet) or art.schedule is None or art.levels is None:
        raise UsageError("trace needs a hopset artifact with its schedule and levels")
    if art.n != g.n:
        raise UsageError(f"graph has {g.n} vertices but the artifact was built for {art.n}")
    pt = compute_pivots(g, art.levels)
    if args.u is not None or args.v is not None:
        if args.u is None or args.v is None:
            raise UsageError("give both --u and --v")
        pairs = [(args.u, args.v)]
    else:
        rng = np.random.default_rng(args.seed)
        pairs = [tuple(int(x) for x in rng.choice(g.n, 2, replace=False)) for _ in range(args.pairs)]
    for u, v in pairs:
        if not (0 <= u < g.n and 0 <= v < g.n):
            raise UsageError(f"pair ({u},{v}) out of range")

    def run(pair):
        try:
            return trace_jump_path(g, art, art.schedule, art.levels, pt, *pair)
        except ValueError:
            return None  # disconnected pair

    results = _pool_map(run, pairs, args.threads)
    lines = []
    for (u, v), c in zip(pairs, results):
        doc = {"u": u, "v": v, "disconnected": True} if c is None else _cert_dict(c)
        lines.append(json.dumps(doc, sort_keys=True, default=_jsonable) + "\n")
    _emit("".join(lines), args.output)
    certs = [c for c in results if c is not None]
    bad = sum(not c.valid for c in certs)
    print(f"certificates {len(certs)} invalid {bad} disconnected {len(results) - len(certs)}", file=sys.stderr)
    return EXIT_FAIL if bad else EXIT_OK


# --- replay ----------------------------------------------------------------


def cmd_replay(args) -> int:
    try:
        doc = json.loads(_read_text(args.config))
    except json.JSONDecodeError as exc:
        raise UsageError(f"bad config: {exc}")
    cfg = RunConfig.from_dict(doc.get("config", doc))
    return main(cfg.to_argv())


# --- parser ----------------------------------------------------------------


def _add_schedule_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--f", default="identity", help="linear | identity | interleaved:C | custom:a,b,...")
    p.add_argument("--t", default="1", help="stretch parameter, may be a fraction like 1/2")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hopspan", description=__doc__.splitlines()[0])
    ap.add_argument("--threads", type=int, default=1, help="worker threads for bench and trace")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a hopset or spanner")
    b.add_argument("target", choices=sorted(_BUILD_VARIANTS))
    _add_schedule_args(b)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--input")
    b.add_argument("--output", help="artifact path ('-' for stdout)")
    b.add_argument("--stats", help="JSON stats path")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="check an artifact against its claimed bounds")
    v.add_argument("--graph", required=True)
    v.add_argument("--artifact", required=True)
    v.add_argument("--alpha", help="override the multiplicative bound")
    v.add_argument("--beta", help="override the hopbound (hopsets) or additive term (spanners)")
    v.add_argument("--pairs", choices=["all", "sample"], default="all")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--report", help="JSON report path")
    v.add_argument("--csv", help="per-pair CSV path")
    v.set_defaults(func=cmd_verify)

    gn = sub.add_parser("gen", help="generate a graph")
    gn.add_argument("target", choices=["tower", "cage", "random"])
    gn.add_argument("--output", help="edge-list path ('-' for stdout)")
    gn.add_argument("--sidecar", help="JSON sidecar path (default OUTPUT.json)")
    gn.add_argument("--seed", type=int, default=0)
    gn.add_argument("--k", type=int, default=2)
    gn.add_argument("--f", default="identity")
    gn.add_argument("--alpha", default="2")
    gn.add_argument("--n", type=int)
    gn.add_argument("--towers", type=int)
    gn.add_argument("--layer-mult", type=int)
    gn.add_argument("--top-size", type=int)
    gn.add_argument("--name", default="petersen")
    gn.add_argument("--m", type=int)
    gn.add_argument("--unweighted", action="store_true")
    gn.add_argument("--wmax", type=int, default=10)
    gn.add_argument("--regular", type=int, help="degree of a random regular graph")
    gn.add_argument("--girth", type=int, help="minimum girth for --regular")
    gn.set_defaults(func=cmd_gen)

    bn = sub.add_parser("bench", help="sweep schedules over random graphs")
    bn.add_argument("--schedule", action="append", help="FKIND@K, e.g. identity@8 or interleaved:2@8 (repeatable)")
    bn.add_argument("--alpha", action="append", help="number, 'claimed' (2t+3) or 'tz' (2k-1); repeatable")
    bn.add_argument("--t", default="1")
    bn.add_argument("--n", type=int, default=100)
    bn.add_argument("--m", type=int)
    bn.add_argument("--unweighted", action="store_true")
    bn.add_argument("--seed", type=int, default=0)
    bn.add_argument("--seeds", type=int, default=1)
    bn.add_argument("--output", help="CSV path (default stdout)")
    bn.set_defaults(func=cmd_bench)

    tr = sub.add_parser("trace", help="jump-path certificates for a hopset")
    tr.add_argument("--graph", required=True)
    tr.add_argument("--artifact", required=True)
    tr.add_argument("--u", type=int)
    tr.add_argument("--v", type=int)
    tr.add_argument("--pairs", type=int, default=10)
    tr.add_argument("--seed", type=int, default=0)
    tr.add_argument("--output", help="JSON-lines path (default stdout)")
    tr.set_defaults(func=cmd_trace)

    rp = sub.add_parser("replay", help="rerun a stored RunConfig")
    rp.add_argument("config")
    rp.set_defaults(func=cmd_replay)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
