"""Command-line front end. Every subcommand prints one JSON document.

Exit status: 0 on success, 2 on usage errors, 1 on runtime errors. The
``distinguish`` verdict is reported in the JSON, never in the exit status.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
import tracemalloc
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cfi import cfi_pair
from .errors import ParameterError, SetWLError
from .graph import ColoredGraph, canonical_certificate, load_graph
from .oracle import PATTERNS, brute_force_isomorphic, count_pattern, enumerate_kc_sets
from .reference import VARIANTS, distinguish_reference
from .refine import (SCHEDULES, ColorTable, distinguish, init_colors, refine_jointly,
                     run_to_stable, trace_to_json)
from .supergraph import (build_component_map, build_supergraph, dense_counts, supergraph_stats,
                         supergraph_to_json)


@dataclass
class RunConfig:
    command: str
    inputs: list[str]
    k: int | None = None
    c: int | None = None
    schedule: str = "sequential"
    max_iters: int | None = None
    output: str | None = None
    format: str | None = None
    deterministic: bool = False
    threads: int = 1

    def validate(self) -> None:
        if self.k is not None:
            if self.k < 1:
                raise ParameterError(f"--k must be >= 1, got {self.k}")
            if self.c is not None and not 1 <= self.c <= self.k:
                raise ParameterError(f"--c must satisfy 1 <= c <= k, got c={self.c}, k={self.k}")
        if self.schedule not in SCHEDULES:
            raise ParameterError(f"--schedule must be one of {SCHEDULES}")
        if self.threads < 1:
            raise ParameterError("--threads must be >= 1")


def _read_graph(path: str, fmt: str | None) -> ColoredGraph:
    if fmt is None:
        fmt = "graph6" if path.endswith((".g6", ".graph6")) else "edge-list"
    return load_graph(Path(path).read_bytes(), fmt)


def _emit(report: dict, output: str | None = None) -> None:
    text = json.dumps(report)
    if output:
        Path(output).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


# ------------------------------------------------------------- commands

def cmd_build(args, cfg: RunConfig) -> dict:
    g = _read_graph(args.input, cfg.format)
    sg = build_supergraph(g, cfg.k, cfg.c)
    if args.stats:
        return {"k": sg.k, "c": sg.c, "n": sg.n, "layer_sizes": sg.layer_sizes, **supergraph_stats(sg).as_dict()}
    cmap = build_component_map(sg)
    init = None if args.no_init_colors else init_colors(g, sg, cmap, ColorTable())
    doc = supergraph_to_json(sg, cmap, init)
    if cfg.output:
        _emit(doc, cfg.output)
        return {"written": cfg.output, "layer_sizes": sg.layer_sizes}
    return doc


def cmd_refine(args, cfg: RunConfig) -> dict:
    g = _read_graph(args.input, cfg.format)
    return trace_to_json(run_to_stable(g, cfg.k, cfg.c, cfg.schedule, cfg.max_iters))


def cmd_distinguish(args, cfg: RunConfig) -> dict:
    a = _read_graph(args.a, cfg.format)
    b = _read_graph(args.b, cfg.format)
    if args.variant == "setwl":
        return distinguish(a, b, cfg.k, cfg.c, cfg.schedule, cfg.max_iters).as_dict()
    return distinguish_reference(a, b, args.variant, cfg.k).as_dict()


def cmd_cfi(args, cfg: RunConfig) -> dict:
    a, b = cfi_pair(cfg.k)
    files = {}
    for tag, cg in (("a", a), ("b", b)):
        path = f"{args.out_prefix}_{tag}.el"
        Path(path).write_text(cg.graph.to_edge_list())
        files[tag] = path
    sidecar = f"{args.out_prefix}.json"
    Path(sidecar).write_text(json.dumps({
        "k": cfg.k,
        "a": {"T": [], "file": files["a"], "vertices": a.sidecar()},
        "b": {"T": [0], "file": files["b"], "vertices": b.sidecar()},
    }) + "\n")
    report = {"k": cfg.k, "files": files, "sidecar": sidecar,
              "vertices": [a.graph.n, b.graph.n], "edges": [len(a.graph.edges), len(b.graph.edges)]}
    if args.sweep:
        sweep = []
        smallest = None
        for c in range(1, cfg.k + 1):
            v = distinguish(a.graph, b.graph, cfg.k, c, cfg.schedule)
            sweep.append({"c": c, "verdict": v.as_dict()["verdict"], "iteration": v.iteration})
            if v.distinguished and smallest is None:
                smallest = c
        report["sweep"] = sweep
        report["smallest_distinguishing_c"] = smallest
    return report


def cmd_bench(args, cfg: RunConfig) -> dict:
    k = cfg.k
    report = {"dense": dense_counts(args.n, k).as_dict()}
    if args.input or args.p is not None:
        if args.input:
            g = _read_graph(args.input, cfg.format)
        else:
            rng = np.random.default_rng(args.seed)
            pairs = [(u, v) for u in range(args.n) for v in range(u + 1, args.n)]
            keep = rng.random(len(pairs)) < args.p
            g = ColoredGraph.from_edges(args.n, [e for e, x in zip(pairs, keep) if x])
        c = cfg.c if cfg.c is not None else k
        tracemalloc.start()
        t0 = time.perf_counter()
        sg = build_supergraph(g, k, c)
        t1 = time.perf_counter()
        trace = refine_jointly([g], k, c, cfg.schedule, cfg.max_iters, supergraphs=[sg])[0]
        t2 = time.perf_counter()
        _, peak = tracemalloc.get_traced_memory()
        tracemalloc.stop()
        stats = supergraph_stats(sg)
        report["measured"] = {
            "n": g.n, "k": k, "c": c, "schedule": cfg.schedule,
            "set_counts": stats.set_counts, "edge_counts": stats.edge_counts,
            "peak_sets": max(stats.set_counts), "peak_edges": max(stats.edge_counts, default=0),
            "iterations_to_stable": trace.iterations_to_stable,
        }
        if not cfg.deterministic:
            report["measured"].update({
                "build_seconds": t1 - t0, "refine_seconds": t2 - t1,
                "peak_python_alloc_bytes_best_effort": peak,
            })
    return report


def cmd_oracle(args, cfg: RunConfig) -> dict:
    if args.oracle_cmd == "iso":
        a = _read_graph(args.a, cfg.format)
        b = _read_graph(args.b, cfg.format)
        return {"isomorphic": brute_force_isomorphic(a, b)}
    g = _read_graph(args.input, cfg.format)
    if args.oracle_cmd == "count":
        return {"pattern": args.pattern, "count": count_pattern(g, args.pattern)}
    return {"k": cfg.k, "c": cfg.c, "sets": [list(s) for s in enumerate_kc_sets(g, cfg.k, cfg.c)]}


def cmd_canon(args, cfg: RunConfig) -> dict:
    g = _read_graph(args.input, cfg.format)
    return {"n": g.n, "certificate": canonical_certificate(g).hex()}


# --------------------------------------------------------------- parser

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["edge-list", "graph6"], default=None,
                   help="input format (default: by extension, .g6 means graph6)")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (env SETWL_THREADS); execution is currently serial")
    p.add_argument("--deterministic", action="store_true",
                   help="serial execution and no wall-clock or memory fields, so stdout is byte-identical")


def _kc(p: argparse.ArgumentParser, need_c: bool = True) -> None:
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--c", type=int, required=need_c, default=None)


def _schedule(p: argparse.ArgumentParser) -> None:
    p.add_argument("--schedule", choices=SCHEDULES, default="sequential")
    p.add_argument("--max-iters", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="setwl", description="(k,c)(<=)-SetWL isomorphism testing toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a (k,c) supergraph and export it as JSON")
    p.add_argument("--input", required=True)
    _kc(p)
    p.add_argument("--stats", action="store_true", help="print set/edge counts only")
    p.add_argument("--no-init-colors", action="store_true")
    p.add_argument("--output", default=None)
    _common(p)

    p = sub.add_parser("refine", help="refine one graph to a stable coloring")
    p.add_argument("--input", required=True)
    _kc(p)
    _schedule(p)
    _common(p)

    p = sub.add_parser("distinguish", help="test whether two graphs are separated")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    _kc(p, need_c=False)
    _schedule(p)
    p.add_argument("--variant", choices=("setwl",) + VARIANTS, default="setwl")
    _common(p)

    p = sub.add_parser("cfi", help="write the CFI(k) pair as edge lists plus a JSON sidecar")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--sweep", action="store_true", help="report the smallest c separating the pair at this k")
    p.add_argument("--schedule", choices=SCHEDULES, default="sequential")
    _common(p)

    p = sub.add_parser("bench", help="dense size comparison, optionally timing a real build+refine")
    p.add_argument("--n", type=int, required=True)
    _kc(p, need_c=False)
    p.add_argument("--input", default=None)
    p.add_argument("--p", type=float, default=None, help="edge probability of a random test graph")
    p.add_argument("--seed", type=int, default=0)
    _schedule(p)
    _common(p)

    p = sub.add_parser("oracle", help="brute-force ground truth")
    osub = p.add_subparsers(dest="oracle_cmd", required=True)
    q = osub.add_parser("iso")
    q.add_argument("--a", required=True)
    q.add_argument("--b", required=True)
    _common(q)
    q = osub.add_parser("count")
    q.add_argument("--input", required=True)
    q.add_argument("--pattern", choices=sorted(PATTERNS), required=True)
    _common(q)
    q = osub.add_parser("sets")
    q.add_argument("--input", required=True)
    _kc(q)
    _common(q)

    p = sub.add_parser("canon", help="certificate of a whole graph (n <= 12)")
    p.add_argument("--input", required=True)
    _common(p)
    return parser


COMMANDS = {
    "build": cmd_build, "refine": cmd_refine, "distinguish": cmd_distinguish, "cfi": cmd_cfi,
    "bench": cmd_bench, "oracle": cmd_oracle, "canon": cmd_canon,
}


def run_command(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    threads = args.threads
    if threads is None:
        env = os.environ.get("SETWL_THREADS", "1")
        threads = int(env) if env.strip().isdigit() else 0
    k = getattr(args, "k", None)
    c = getattr(args, "c", None)
    if args.command == "distinguish" and c is None:
        c = k
    cfg = RunConfig(
        command=args.command,
        inputs=[x for x in (getattr(args, "input", None), getattr(args, "a", None), getattr(args, "b", None)) if x],
        k=k, c=c, schedule=getattr(args, "schedule", "sequential"),
        max_iters=getattr(args, "max_iters", None), output=getattr(args, "output", None),
        format=args.format, deterministic=args.deterministic, threads=threads,
    )
    try:
        cfg.validate()
    except ParameterError as exc:
        parser.print_usage(sys.stderr)
        print(f"setwl: error: {exc}", file=sys.stderr)
        return 2
    try:
        report = COMMANDS[args.command](args, cfg)
    except (SetWLError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    _emit(report)
    return 0


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
