"""Robustness sweeps over flip probabilities, run manifests, CSV and SVG output."""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import csv
import json
import math
from pathlib import Path
import xml.etree.ElementTree as ET

import numpy as np

from . import __version__
from ._accel import backend_name
from .errors import GraphError, RRSpectralError
from .generators import (
    NegativeFamilySpec,
    block_constant_estimates,
    block_spectrum,
    eigenvalue_ratio_curve,
    erdos_renyi,
    expected_laplacian_negative,
    expected_max_degree,
    negative_family,
    planted_partition,
    sbm,
    shift_identity_residuals,
)
from .graph import barbell_graph, d_size, path_graph, symmetric_difference
from .ingest import parse_edge_list, read_graph
from .privacy import flip_sample
from .sampling import GENERATOR_ID, GOLDEN, SALT_BLOCK, SALT_P, SALT_TRIAL, trial_seed
from .spectral import laplacian_spectrum, robustness_value, smallest_eigenpairs, sweep

MANIFEST_FORMAT = "rrspectral-sweep/1"


# ---------------------------------------------------------------- graph sources

@dataclass(frozen=True)
class GraphSource:
    """Where a sweep's graph comes from: a file or a generator spec plus seed.

    Generator specs: ``er:n,p``, ``sbm:s1xs2x...,p_in,p_out``, ``neg:n,beta``,
    ``barbell:k``, ``path:n``. ``kind`` is ``"file"``, ``"edges"`` (raw SNAP
    list) or ``"gen"``.
    """

    kind: str
    value: str
    seed: int = 0

    def to_dict(self):
        return {"kind": self.kind, "value": self.value, "seed": self.seed}

    @classmethod
    def from_dict(cls, d):
        return cls(d["kind"], d["value"], int(d.get("seed", 0)))

    def load(self):
        if self.kind == "file":
            return read_graph(self.value)
        if self.kind == "edges":
            return parse_edge_list(self.value).graph
        if self.kind == "gen":
            return generate(self.value, self.seed)
        raise ValueError(f"unknown graph source kind {self.kind!r}")


def generate(spec, seed=0):
    """Build a graph from a generator spec string (see :class:`GraphSource`)."""
    name, _, args = spec.partition(":")
    parts = [a for a in args.split(",") if a]
    try:
        if name == "er":
            n, p = int(parts[0]), float(parts[1])
            return erdos_renyi(n, p, seed)
        if name == "sbm":
            sizes = [int(s) for s in parts[0].split("x")]
            return sbm(planted_partition(sizes, float(parts[1]), float(parts[2])), seed)
        if name == "neg":
            clamp = len(parts) > 2 and parts[2] == "clamp"
            return negative_family(NegativeFamilySpec(int(parts[0]), float(parts[1])), seed, clamp=clamp)
        if name == "barbell":
            return barbell_graph(int(parts[0]))
        if name == "path":
            return path_graph(int(parts[0]))
    except (IndexError, ValueError) as exc:
        if isinstance(exc, GraphError):
            raise
        raise ValueError(f"bad generator spec {spec!r}: {exc}") from None
    raise ValueError(f"unknown generator {name!r} in {spec!r}")


# ---------------------------------------------------------------- config/results

@dataclass(frozen=True)
class SweepConfig:
    p_grid: tuple
    trials: int = 100
    base_seed: int = 0
    source: GraphSource = None
    method: str = "lapack"

    def __post_init__(self):
        grid = tuple(float(p) for p in self.p_grid)
        if not grid:
            raise ValueError("p_grid is empty")
        if any(not 0.0 <= p <= 0.5 for p in grid):
            raise ValueError("grid entries must lie in [0, 0.5]")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        object.__setattr__(self, "p_grid", grid)


@dataclass(frozen=True)
class TrialOutcome:
    d_size: int  # -1 when the trial failed
    lambda2: float
    lambda3: float
    delta: int
    eta: float
    seed: int
    flips: int
    error: str = ""


@dataclass
class PRecord:
    p: float
    trials: list  # TrialOutcome per trial, in trial order
    lambda2: float  # of G
    lambda3: float
    delta: int
    eta: float

    @property
    def d_sizes(self):
        return [t.d_size for t in self.trials if not t.error]

    @property
    def seeds(self):
        return [t.seed for t in self.trials]

    @property
    def failures(self):
        return sum(1 for t in self.trials if t.error)

    @property
    def worst(self):
        d = self.d_sizes
        return max(d) if d else math.nan

    @property
    def mean(self):
        d = self.d_sizes
        return float(np.mean(d)) if d else math.nan

    @property
    def std(self):
        d = self.d_sizes
        return float(np.std(d)) if d else math.nan


@dataclass
class SweepResult:
    config: SweepConfig
    n: int
    graph_hash: str
    records: list = field(default_factory=list)

    def per_trial(self):
        """``{p: [d_size, ...]}`` in trial order (failures as -1)."""
        return {r.p: [t.d_size for t in r.trials] for r in self.records}

    def onset(self, fraction=0.2):
        """First ``p`` whose worst ``d_size`` exceeds ``fraction * n``, else None."""
        for r in self.records:
            if r.d_sizes and r.worst > fraction * self.n:
                return r.p
        return None

    def summary(self):
        rows = [f"n = {self.n}, trials = {self.config.trials}, seed = {self.config.base_seed}"]
        rows.append("p worst mean std failures")
        for r in self.records:
            rows.append(f"{r.p:g} {r.worst} {r.mean:.4f} {r.std:.4f} {r.failures}")
        return "\n".join(rows)


# ---------------------------------------------------------------- trial kernel

def _stats(H, spectrum):
    lam2, lam3 = spectrum[1], spectrum[2]
    try:
        eta = robustness_value(H.max_degree, lam2, lam3)
    except RRSpectralError:
        eta = math.inf
    return lam2, lam3, H.max_degree, eta


def run_trial(G, base_cut, p, seed, method="lapack"):
    """One flip of ``G`` and the partition distance of the re-clustered output."""
    sample = flip_sample(G.n, p, seed)
    H = symmetric_difference(G, sample.F)
    try:
        sp = laplacian_spectrum(H, k=3, method=method)
        cut = sweep(H, spectrum=sp, allow_disconnected=True).cut
    except RRSpectralError as exc:
        return TrialOutcome(-1, math.nan, math.nan, H.max_degree, math.nan, seed, len(sample), repr(exc))
    lam2, lam3, delta, eta = _stats(H, sp)
    return TrialOutcome(d_size(base_cut, cut), lam2, lam3, delta, eta, seed, len(sample))


_WORKER = {}


def _init_worker(G, base_cut, method):
    _WORKER.update(G=G, cut=base_cut, method=method)


def _run_chunk(tasks):
    G, cut, method = _WORKER["G"], _WORKER["cut"], _WORKER["method"]
    return [(key, run_trial(G, cut, p, seed, method)) for key, p, seed in tasks]


def robustness_sweep(G, cfg, workers=1):
    """Run ``cfg.trials`` flips per grid point and compare clusterings.

    Trial ``t`` at grid index ``i`` uses seed ``trial_seed(base_seed, i, t)``,
    so the result does not depend on execution order or ``workers``. A trial
    whose eigensolve fails is recorded with its error instead of aborting.
    """
    sp = laplacian_spectrum(G, k=3, method=cfg.method)
    base = sweep(G, spectrum=sp, method=cfg.method)
    lam2, lam3, delta, eta = _stats(G, sp)
    tasks = [
        ((i, t), p, trial_seed(cfg.base_seed, i, t))
        for i, p in enumerate(cfg.p_grid)
        for t in range(cfg.trials)
    ]
    out = {}
    if workers <= 1:
        _init_worker(G, base.cut, cfg.method)
        for key, res in _run_chunk(tasks):
            out[key] = res
        _WORKER.clear()
    else:
        size = max(1, len(tasks) // (4 * workers))
        chunks = [tasks[k:k + size] for k in range(0, len(tasks), size)]
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(G, base.cut, cfg.method)) as ex:
            for part in ex.map(_run_chunk, chunks):
                out.update(part)
    records = [
        PRecord(p, [out[(i, t)] for t in range(cfg.trials)], lam2, lam3, delta, eta)
        for i, p in enumerate(cfg.p_grid)
    ]
    return SweepResult(config=cfg, n=G.n, graph_hash=G.content_hash(), records=records)


@dataclass
class PerturbationCounts:
    """How often the three flip-perturbation bounds held over a sweep's trials."""

    trials: int
    lambda2_not_increased: int
    lambda3_kept_tenth: int
    degree_at_most_double: int
    lambda2_shift: list  # per-trial lambda2(G△F) - lambda2(G)


def perturbation_counts(result, p_index=0):
    r = result.records[p_index]
    ok = [t for t in r.trials if not t.error]
    return PerturbationCounts(
        trials=len(ok),
        lambda2_not_increased=sum(t.lambda2 <= r.lambda2 for t in ok),
        lambda3_kept_tenth=sum(t.lambda3 >= r.lambda3 / 10 for t in ok),
        degree_at_most_double=sum(t.delta <= 2 * r.delta for t in ok),
        lambda2_shift=[t.lambda2 - r.lambda2 for t in ok],
    )


# ---------------------------------------------------------------- manifests

def seed_constants():
    return {"golden": hex(GOLDEN), "salt_p": hex(SALT_P), "salt_trial": hex(SALT_TRIAL), "salt_block": hex(SALT_BLOCK)}


def run_manifest(cfg, G=None):
    """JSON text that pins down a sweep: replaying it gives identical trials."""
    if G is None:
        if cfg.source is None:
            raise ValueError("need a graph or a config with a source")
        G = cfg.source.load()
    doc = {
        "format": MANIFEST_FORMAT,
        "version": __version__,
        "generator": GENERATOR_ID,
        "seed_mix": seed_constants(),
        "base_seed": int(cfg.base_seed),
        "p_grid": list(cfg.p_grid),
        "trials": int(cfg.trials),
        "method": cfg.method,
        "source": cfg.source.to_dict() if cfg.source else None,
        "graph": {"n": G.n, "m": G.m, "sha256": G.content_hash()},
        "backend": backend_name(),
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def config_from_manifest(text):
    doc = json.loads(text)
    if doc.get("format") != MANIFEST_FORMAT:
        raise ValueError(f"unsupported manifest format {doc.get('format')!r}")
    if doc.get("generator") != GENERATOR_ID:
        raise ValueError(f"manifest generator {doc.get('generator')!r} != {GENERATOR_ID!r}")
    src = GraphSource.from_dict(doc["source"]) if doc.get("source") else None
    cfg = SweepConfig(tuple(doc["p_grid"]), int(doc["trials"]), int(doc["base_seed"]), src, doc.get("method", "lapack"))
    return cfg, doc


def replay(text, G=None, workers=1):
    """Re-run the sweep a manifest describes; the graph hash must match."""
    cfg, doc = config_from_manifest(text)
    if G is None:
        if cfg.source is None:
            raise ValueError("manifest has no graph source; pass the graph")
        G = cfg.source.load()
    if G.content_hash() != doc["graph"]["sha256"]:
        raise GraphError("graph content hash does not match the manifest")
    return robustness_sweep(G, cfg, workers=workers)


# ---------------------------------------------------------------- CSV / SVG

TRIAL_HEADER = ["p", "trial", "d_size", "lambda2", "lambda3", "delta", "eta", "seed"]
SUMMARY_HEADER = ["p", "worst", "mean", "std"]


def summary_path(path):
    path = Path(path)
    return path.with_name(path.stem + "_summary" + path.suffix)


def emit_csv(result, path):
    """Per-trial rows at ``path`` and per-p summary next to it; returns both paths."""
    if not result.records:
        raise ValueError("empty sweep result")
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRIAL_HEADER)
        for r in result.records:
            for t, o in enumerate(r.trials):
                w.writerow([repr(r.p), t, o.d_size, repr(o.lambda2), repr(o.lambda3), o.delta, repr(o.eta), o.seed])
    spath = summary_path(path)
    with open(spath, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SUMMARY_HEADER)
        for r in result.records:
            w.writerow([repr(r.p), r.worst, repr(r.mean), repr(r.std)])
    return path, spath


def read_trials_csv(path):
    """``{p: [d_size, ...]}`` from a per-trial CSV, trial order preserved."""
    out = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out.setdefault(float(row["p"]), []).append(int(row["d_size"]))
    return out


def emit_svg(result, path, width=640, height=400):
    """Line chart of worst and mean ``d_size`` against ``p``."""
    if not result.records:
        raise ValueError("empty sweep result")
    ps = np.array([r.p for r in result.records])
    worst = np.array([r.worst for r in result.records], dtype=float)
    mean = np.array([r.mean for r in result.records], dtype=float)
    left, right, top, bottom = 70, 20, 20, 50
    pw, ph = width - left - right, height - top - bottom
    xlo, xhi = float(ps.min()), float(ps.max())
    ytop = float(np.nanmax(np.concatenate([worst, mean, [1.0]])))
    xs = lambda p: left + (pw * (p - xlo) / (xhi - xlo) if xhi > xlo else pw / 2)
    ys = lambda d: top + ph * (1 - (0 if math.isnan(d) else d) / ytop)

    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=str(width), height=str(height),
                     viewBox=f"0 0 {width} {height}")
    ET.SubElement(svg, "rect", x="0", y="0", width=str(width), height=str(height), fill="white")
    axes = dict(stroke="black", **{"stroke-width": "1"})
    ET.SubElement(svg, "line", x1=str(left), y1=str(top + ph), x2=str(left + pw), y2=str(top + ph), **axes)
    ET.SubElement(svg, "line", x1=str(left), y1=str(top), x2=str(left), y2=str(top + ph), **axes)
    for frac in (0.0, 0.5, 1.0):
        p = xlo + frac * (xhi - xlo)
        t = ET.SubElement(svg, "text", x=f"{xs(p):.1f}", y=str(top + ph + 16), **{"text-anchor": "middle", "font-size": "11"})
        t.text = f"{p:.4g}"
        d = frac * ytop
        t = ET.SubElement(svg, "text", x=str(left - 6), y=f"{ys(d) + 4:.1f}", **{"text-anchor": "end", "font-size": "11"})
        t.text = f"{d:.3g}"
    t = ET.SubElement(svg, "text", x=str(left + pw / 2), y=str(height - 10), **{"text-anchor": "middle", "font-size": "13"})
    t.text = "flip probability p"
    t = ET.SubElement(svg, "text", x="16", y=str(top + ph / 2), transform=f"rotate(-90 16 {top + ph / 2})",
                      **{"text-anchor": "middle", "font-size": "13"})
    t.text = "d_size"
    for series, colour, label, dy in ((worst, "#c0392b", "worst", 0), (mean, "#2e6fba", "mean", 16)):
        pts = " ".join(f"{xs(p):.2f},{ys(d):.2f}" for p, d in zip(ps, series))
        ET.SubElement(svg, "polyline", points=pts, fill="none", stroke=colour, **{"stroke-width": "2"})
        t = ET.SubElement(svg, "text", x=str(left + pw - 60), y=str(top + 14 + dy), fill=colour, **{"font-size": "12"})
        t.text = label
    ET.ElementTree(svg).write(path, encoding="utf-8", xml_declaration=True)
    return Path(path)


# ---------------------------------------------------------------- negative family

@dataclass
class NegativeDemo:
    spec: NegativeFamilySpec
    eigenvalues: np.ndarray  # five smallest of E[L_G]
    analytic: np.ndarray  # same, from the block formula
    expected_max_degree: float
    curve: list  # (p, lambda2/lambda3)
    residuals: list  # (p, max shift residual over i = 2..5, flipped lambda1)
    closed_forms: dict

    @property
    def eta(self):
        return self.expected_max_degree * self.eigenvalues[1] / self.eigenvalues[2] ** 2

    @property
    def saturation_p(self):
        """``p`` with ``p n = 100 lambda3``; above 1/2 means unreachable by flipping."""
        return 100 * self.eigenvalues[2] / self.spec.n

    def render(self):
        n, lam = self.spec.n, self.eigenvalues
        cf = self.closed_forms
        rows = [
            f"n = {n}, beta = {self.spec.beta:g}, blocks = {self.spec.sizes}",
            "E[L_G] smallest eigenvalues: " + " ".join(f"{x:.10g}" for x in lam),
            "block formula:              " + " ".join(f"{x:.10g}" for x in self.analytic),
            f"expected max degree = {self.expected_max_degree:.6g}, eta = {self.eta:.6g}",
            f"Dbar / (ln n lambda3) = {self.expected_max_degree / (math.log(n) * lam[2]):.6g}",
            f"block-constant estimates: lambda3 = {cf['lambda3_block_mode']:.6g}, max degree = {cf['max_degree_leading']:.6g}",
            f"p with p n = 100 lambda3: {self.saturation_p:.6g}" + ("  (outside [0, 1/2])" if self.saturation_p > 0.5 else ""),
            "p ratio max_residual flipped_lambda1",
        ]
        res = {p: (r, l1) for p, r, l1 in self.residuals}
        for p, ratio in self.curve:
            r, l1 = res.get(p, (math.nan, math.nan))
            rows.append(f"{p:g} {ratio:.10g} {r:.3e} {l1:.3e}")
        return "\n".join(rows)

    def write_csv(self, path):
        res = {p: (r, l1) for p, r, l1 in self.residuals}
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["p", "ratio", "max_residual", "lambda1"])
            for p, ratio in self.curve:
                r, l1 = res.get(p, (math.nan, math.nan))
                w.writerow([repr(p), repr(ratio), repr(r), repr(l1)])
        return Path(path)


def negative_demo(n, beta, p_grid, residual_grid=None):
    """Ratio curve of the expected flipped Laplacian plus shift-identity residuals.

    ``residual_grid`` defaults to ``p_grid``; each of its points costs one
    dense eigensolve.
    """
    spec = NegativeFamilySpec(int(n), float(beta))
    EL = expected_laplacian_negative(spec)
    lam = smallest_eigenpairs(EL, 5).values
    P = spec.rate_matrix()
    curve = eigenvalue_ratio_curve(spec, p_grid, base=(lam[1], lam[2]))
    residuals = shift_identity_residuals(EL, p_grid if residual_grid is None else residual_grid, k=5)
    return NegativeDemo(
        spec=spec,
        eigenvalues=lam,
        analytic=block_spectrum(spec.sizes, P)[:5],
        expected_max_degree=expected_max_degree(spec.sizes, P),
        curve=curve,
        residuals=residuals,
        closed_forms=block_constant_estimates(spec),
    )
