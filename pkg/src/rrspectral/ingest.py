"""Edge-list ingestion, peripheral-set pruning and the canonical graph format."""
from dataclasses import dataclass, field
import os
from pathlib import Path

import numpy as np

from .errors import DataFormatError
from .graph import Graph, _keys_to_pairs, build_graph, largest_component
from .spectral import sweep

DATA_ENV = "RRSPECTRAL_DATA_DIR"


@dataclass
class EdgeListParse:
    """Parsed SNAP-style edge list. Unpacks as ``graph, ids``."""

    graph: Graph
    ids: np.ndarray  # ids[k] = original id of dense vertex k, ascending
    self_loops: int = 0
    duplicates: int = 0
    lines: int = 0

    def __iter__(self):
        return iter((self.graph, self.ids))


def parse_edge_list(path):
    """Read whitespace-separated ``u v`` lines; ``#`` starts a comment line.

    Ids are arbitrary nonnegative integers, mapped to ``0..n-1`` in ascending
    order. Self-loops are dropped and counted; duplicate and reversed pairs
    collapse. Vertices that only occur in self-loops are dropped with them.
    """
    us, vs = [], []
    loops = 0
    lineno = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tok = line.split()
            if len(tok) != 2:
                raise DataFormatError(f"expected 2 fields, got {len(tok)}: {line!r}", line=lineno)
            try:
                u, v = int(tok[0]), int(tok[1])
            except ValueError:
                raise DataFormatError(f"non-integer vertex id in {line!r}", line=lineno) from None
            if u < 0 or v < 0:
                raise DataFormatError(f"negative vertex id in {line!r}", line=lineno)
            if u == v:
                loops += 1
                continue
            us.append(u)
            vs.append(v)
    if not us:
        raise DataFormatError(f"{path}: no edges found", line=lineno)
    raw_pairs = np.array([us, vs], dtype=np.int64).T
    ids, dense = np.unique(raw_pairs, return_inverse=True)
    dense = dense.reshape(-1, 2)
    G = build_graph(ids.size, dense)
    return EdgeListParse(G, ids, self_loops=loops, duplicates=len(us) - G.m, lines=lineno)


@dataclass(frozen=True)
class PruneConfig:
    boundary_threshold: int = 10
    min_keep_fraction: float = 0.5
    max_rounds: int = 50

    def __post_init__(self):
        if self.boundary_threshold < 0:
            raise ValueError("boundary_threshold must be >= 0")
        if not 0.0 <= self.min_keep_fraction <= 1.0:
            raise ValueError("min_keep_fraction must lie in [0, 1]")
        if self.max_rounds < 0:
            raise ValueError("max_rounds must be >= 0")


@dataclass(frozen=True)
class Removal:
    round: int  # 0 = dropped outside the largest component
    size: int
    boundary: int
    vertices: tuple  # ids of the input graph


@dataclass
class PruneLog:
    removals: list = field(default_factory=list)
    kept: np.ndarray = None  # input-graph ids of the surviving vertices
    stop_reason: str = ""
    rounds: int = 0

    def __iter__(self):
        return iter(self.removals)

    def __len__(self):
        return len(self.removals)

    def render(self):
        rows = ["round size boundary"]
        rows += [f"{r.round} {r.size} {r.boundary}" for r in self.removals]
        rows.append(f"# stop: {self.stop_reason}; kept {len(self.kept)} vertices")
        return "\n".join(rows)


def _restrict(G, kept, keep_local):
    H, local = G.subgraph(keep_local)
    return H, kept[local]


def _drop_small_components(G, kept, log, rnd):
    H, local = largest_component(G)
    if H.n == G.n:
        return G, kept
    gone = np.setdiff1d(np.arange(G.n), local)
    log.removals.append(Removal(rnd, int(gone.size), 0, tuple(int(x) for x in kept[gone])))
    return H, kept[local]


def prune(G, cfg=None):
    """Peel low-boundary peripheral sets off ``G``.

    Keeps the largest component, then repeatedly runs the sweep cut and
    removes its smaller side while that side has at most
    ``boundary_threshold`` crossing edges and the rest keeps at least
    ``min_keep_fraction`` of the vertices. Components split off by a removal
    are dropped in the same round. Returns ``(graph, log)``.
    """
    cfg = cfg or PruneConfig()
    log = PruneLog()
    kept = np.arange(G.n)
    G, kept = _drop_small_components(G, kept, log, 0)
    log.stop_reason = "max_rounds reached"
    for rnd in range(1, cfg.max_rounds + 1):
        if G.n < 3:
            log.stop_reason = "fewer than 3 vertices"
            break
        sw = sweep(G)
        side = sw.cut.mask
        if side.sum() > G.n - side.sum():
            side = ~side
        small = int(side.sum())
        boundary = sw.edges_cut
        if boundary > cfg.boundary_threshold:
            log.stop_reason = f"boundary {boundary} > {cfg.boundary_threshold}"
            break
        if G.n - small < cfg.min_keep_fraction * G.n:
            log.stop_reason = f"removing {small} of {G.n} would break min_keep_fraction"
            break
        gone = np.flatnonzero(side)
        log.removals.append(Removal(rnd, small, boundary, tuple(int(x) for x in kept[gone])))
        G, kept = _restrict(G, kept, np.flatnonzero(~side))
        G, kept = _drop_small_components(G, kept, log, rnd)
        log.rounds = rnd
    log.kept = kept
    return G, log


def write_graph(G, path):
    """Canonical text: ``n m`` header, then ``u v`` per edge, ``u < v``, sorted."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_graph(G))


def format_graph(G):
    body = "".join(f"{u} {v}\n" for u, v in G.edges.tolist())
    return f"{G.n} {G.m}\n" + body


def read_graph(path):
    """Strict reader for :func:`write_graph` output; errors carry the line number."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise DataFormatError("empty graph file", line=1)
    head = lines[0].split()
    try:
        n, m = (int(x) for x in head)
    except ValueError:
        raise DataFormatError(f"header must be 'n m', got {lines[0]!r}", line=1) from None
    if n < 0 or m < 0:
        raise DataFormatError("negative header value", line=1)
    if len(lines) - 1 != m:
        raise DataFormatError(f"header declares {m} edges, found {len(lines) - 1}", line=1)
    keys = np.empty(m, dtype=np.int64)
    prev = -1
    for i, line in enumerate(lines[1:]):
        lineno = i + 2
        tok = line.split()
        try:
            u, v = (int(x) for x in tok)
        except ValueError:
            raise DataFormatError(f"expected 'u v', got {line!r}", line=lineno) from None
        if not 0 <= u < v < n:
            raise DataFormatError(f"edge {u} {v} violates 0 <= u < v < n={n}", line=lineno)
        key = u * n + v
        if key <= prev:
            raise DataFormatError("edges not in strictly increasing order", line=lineno)
        keys[i] = prev = key
    return Graph(n, _keys_to_pairs(keys, n))


def dataset_dir(explicit=None):
    """Directory holding SNAP files: the explicit argument, else ``$RRSPECTRAL_DATA_DIR``."""
    d = explicit or os.environ.get(DATA_ENV)
    return Path(d) if d else None


def find_dataset(name, explicit=None):
    """Path of ``name`` (e.g. ``"0.edges"``) if present, else None."""
    d = dataset_dir(explicit)
    if d is None:
        return None
    for cand in (d / name, d / "facebook" / name):
        if cand.is_file():
            return cand
    return None
