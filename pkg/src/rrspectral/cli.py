"""Command-line entry point: ``rrspectral <command> ...``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""
import argparse
import math
from pathlib import Path
import sys

import numpy as np

from . import __version__
from ._accel import backend_name
from .errors import DataFormatError, GraphError, NumericalError
from .experiments import (
    GraphSource,
    SweepConfig,
    config_from_manifest,
    emit_csv,
    emit_svg,
    negative_demo,
    robustness_sweep,
    run_manifest,
)
from .ingest import PruneConfig, dataset_dir, parse_edge_list, prune, write_graph
from .privacy import apply_randomized_response, privacy_budget
from .spectral import check_assumptions, laplacian_spectrum, sweep

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_grid(text):
    """Comma list (``0.001,0.01``), ``q:step,lo,hi`` (``step*q`` for ``lo <= q <= hi``)
    or ``lin:start,stop,count``."""
    try:
        if text.startswith("q:"):
            step, lo, hi = text[2:].split(",")
            return [round(float(step) * q, 15) for q in range(int(lo), int(hi) + 1)]
        if text.startswith("lin:"):
            a, b, k = text[4:].split(",")
            return [float(x) for x in np.linspace(float(a), float(b), int(k))]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot parse p-grid {text!r}") from None


def _source(args):
    if getattr(args, "gen", None):
        if args.graph:
            raise UsageError("give either a graph file or --gen, not both")
        return GraphSource("gen", args.gen, args.graph_seed)
    if not args.graph:
        raise UsageError("a graph file or --gen spec is required")
    path = Path(args.graph)
    if not path.exists() and dataset_dir(args.data_dir):
        cand = dataset_dir(args.data_dir) / args.graph
        if cand.exists():
            path = cand
    fmt = args.format
    if fmt == "auto":
        fmt = "edges" if path.suffix == ".edges" else "canonical"
    return GraphSource("edges" if fmt == "edges" else "file", str(path), 0)


def _add_graph_args(sp):
    sp.add_argument("graph", nargs="?", help="canonical graph file or SNAP .edges list")
    sp.add_argument("--gen", help="generator spec: er:n,p | sbm:200x200,p_in,p_out | neg:n,beta | barbell:k | path:n")
    sp.add_argument("--graph-seed", type=int, default=0, help="seed for --gen")
    sp.add_argument("--format", choices=["auto", "canonical", "edges"], default="auto")


def build_parser():
    ap = _Parser(prog="rrspectral", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({backend_name()})")
    ap.add_argument("--data-dir", help="directory with SNAP files (default $RRSPECTRAL_DATA_DIR)")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    sp = sub.add_parser("cluster", help="two-way spectral clustering")
    _add_graph_args(sp)
    sp.add_argument("--members", action="store_true", help="print the smaller side's vertices")

    sp = sub.add_parser("flip", help="apply randomized response once")
    _add_graph_args(sp)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="write the flipped graph here")

    sp = sub.add_parser("sweep", help="robustness sweep over a p-grid")
    _add_graph_args(sp)
    sp.add_argument("--p-grid", default="q:0.0001,1,50")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out", help="output directory for CSV, SVG and manifest")
    sp.add_argument("--replay", help="re-run the sweep recorded in this manifest")

    sp = sub.add_parser("check", help="report the well-clustering conditions")
    _add_graph_args(sp)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--eta-max", type=float, default=1.0)

    sp = sub.add_parser("negative-demo", help="eigenvalue ratio of the 3-block family")
    sp.add_argument("--n", type=int, default=1000)
    sp.add_argument("--beta", type=float, default=0.3)
    sp.add_argument("--p-grid", default="0,0.001,0.01,0.1")
    sp.add_argument("--out", help="CSV path")

    sp = sub.add_parser("prune", help="parse an edge list and peel peripheral sets")
    sp.add_argument("edges_file")
    sp.add_argument("--threshold", type=int, default=10)
    sp.add_argument("--min-keep", type=float, default=0.5)
    sp.add_argument("--max-rounds", type=int, default=50)
    sp.add_argument("--out", help="write the pruned graph (canonical format)")
    sp.add_argument("--log", help="write the removal log")

    sp = sub.add_parser("spectrum", help="smallest Laplacian eigenvalues")
    _add_graph_args(sp)
    sp.add_argument("--k", type=int, default=3)
    return ap


def cmd_cluster(args):
    G = _source(args).load()
    sw = sweep(G)
    S = sw.cut if sw.cut.size <= G.n - sw.cut.size else sw.cut.complement()
    print(f"n = {G.n}, m = {G.m}, lambda2 = {sw.spectrum[1]:.10g}, lambda3 = {sw.spectrum[2]:.10g}")
    print(f"cut: |S| = {S.size}, |V-S| = {G.n - S.size}, edges = {sw.edges_cut}, alpha = {sw.alpha:.10g}")
    if args.members:
        print(" ".join(map(str, S.members)))


def cmd_flip(args):
    G = _source(args).load()
    H, sample = apply_randomized_response(G, args.p, args.seed)
    eps = privacy_budget(args.p).epsilon if args.p > 0 else math.inf
    print(f"flipped {len(sample)} pairs, m {G.m} -> {H.m}, epsilon = {eps:.6g}, generator = {sample.generator}")
    if args.out:
        write_graph(H, args.out)


def cmd_sweep(args):
    if args.replay:
        cfg, _ = config_from_manifest(Path(args.replay).read_text())
        G = cfg.source.load() if cfg.source else _source(args).load()
    else:
        src = _source(args)
        cfg = SweepConfig(tuple(parse_grid(args.p_grid)), args.trials, args.seed, src)
        G = src.load()
    res = robustness_sweep(G, cfg, workers=args.workers)
    print(res.summary())
    onset = res.onset()
    print(f"first p with worst d_size > 0.2 n: {onset if onset is not None else 'none'}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        emit_csv(res, out / "trials.csv")
        emit_svg(res, out / "sweep.svg")
        (out / "manifest.json").write_text(run_manifest(cfg, G) + "\n")
        print(f"wrote {out}/trials.csv, trials_summary.csv, sweep.svg, manifest.json")


def cmd_check(args):
    G = _source(args).load()
    print(check_assumptions(G, args.p, eta_max=args.eta_max).render())


def cmd_negative_demo(args):
    demo = negative_demo(args.n, args.beta, parse_grid(args.p_grid))
    print(demo.render())
    if args.out:
        demo.write_csv(args.out)


def cmd_prune(args):
    path = Path(args.edges_file)
    if not path.exists() and dataset_dir(args.data_dir):
        path = dataset_dir(args.data_dir) / args.edges_file
    parsed = parse_edge_list(path)
    cfg = PruneConfig(args.threshold, args.min_keep, args.max_rounds)
    H, log = prune(parsed.graph, cfg)
    print(f"parsed n = {parsed.graph.n}, m = {parsed.graph.m}, self-loops dropped = {parsed.self_loops}")
    print(log.render())
    print(f"pruned n = {H.n}, m = {H.m}")
    if args.out:
        write_graph(H, args.out)
    if args.log:
        ids = parsed.ids
        lines = [log.render(), "# removed original ids per record"]
        lines += [" ".join(str(ids[v]) for v in r.vertices) for r in log.removals]
        Path(args.log).write_text("\n".join(lines) + "\n")


def cmd_spectrum(args):
    G = _source(args).load()
    sp = laplacian_spectrum(G, k=args.k)
    for i, v in enumerate(sp.values, start=1):
        print(f"lambda{i} = {v:.12g}")


COMMANDS = {
    "cluster": cmd_cluster,
    "flip": cmd_flip,
    "sweep": cmd_sweep,
    "check": cmd_check,
    "negative-demo": cmd_negative_demo,
    "prune": cmd_prune,
    "spectrum": cmd_spectrum,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.cmd](args)
    except (GraphError, DataFormatError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0
