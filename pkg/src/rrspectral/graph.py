"""Simple undirected graphs on ``0..n-1``, cuts, and partition distance.

Graphs are immutable: edge arrays are stored sorted and read-only, so a graph
can be shared between worker processes and hashed by content.
"""
from fractions import Fraction
import hashlib

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _cc

from . import kernels
from .errors import DegenerateCutError, GraphError

BRUTE_FORCE_LIMIT = 16


def _canonical_pairs(n, pairs, what="pair"):
    arr = np.asarray(pairs, dtype=np.int64)
    if arr.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    arr = arr.reshape(-1, 2)
    bad = (arr < 0) | (arr >= n)
    if bad.any():
        row = int(np.flatnonzero(bad.any(axis=1))[0])
        raise GraphError(f"{what} {tuple(arr[row])} out of range for n={n}")
    loops = arr[:, 0] == arr[:, 1]
    if loops.any():
        row = int(np.flatnonzero(loops)[0])
        raise GraphError(f"self-loop {tuple(arr[row])}")
    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    keys = np.unique(lo * n + hi)
    return _keys_to_pairs(keys, n)


def _keys_to_pairs(keys, n):
    out = np.empty((keys.size, 2), dtype=np.int64)
    if n:
        out[:, 0] = keys // n
        out[:, 1] = keys % n
    out.setflags(write=False)
    return out


class EdgeSet:
    """A set of unordered vertex pairs over ``0..n-1``, e.g. the pairs to flip."""

    __slots__ = ("n", "pairs")

    def __init__(self, n, pairs=()):
        self.n = int(n)
        self.pairs = _canonical_pairs(self.n, pairs)

    @classmethod
    def _from_keys(cls, n, keys):
        obj = cls.__new__(cls)
        obj.n = int(n)
        obj.pairs = _keys_to_pairs(np.asarray(keys, dtype=np.int64), obj.n)
        return obj

    @property
    def keys(self):
        return self.pairs[:, 0] * self.n + self.pairs[:, 1]

    def __len__(self):
        return self.pairs.shape[0]

    def __iter__(self):
        return (tuple(map(int, p)) for p in self.pairs)

    def __eq__(self, other):
        return isinstance(other, EdgeSet) and self.n == other.n and np.array_equal(self.pairs, other.pairs)

    def __repr__(self):
        return f"EdgeSet(n={self.n}, size={len(self)})"


class Graph:
    """Undirected simple graph with sorted edge list and CSR adjacency.

    ``edges`` is an ``(m, 2)`` int64 array with ``u < v`` rows in lexicographic
    order. ``indptr``/``indices`` give adjacency lists sorted ascending.
    """

    __slots__ = ("n", "edges", "indptr", "indices", "_degrees")

    def __init__(self, n, edges):
        # trusted constructor; use build_graph() for unchecked input
        self.n = int(n)
        self.edges = edges
        u, v = edges[:, 0], edges[:, 1]
        rows = np.concatenate([u, v])
        cols = np.concatenate([v, u])
        order = np.lexsort((cols, rows))
        self.indices = cols[order]
        self.indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=self.n), out=self.indptr[1:])
        self._degrees = np.diff(self.indptr)
        for arr in (self.indices, self.indptr, self._degrees):
            arr.setflags(write=False)

    @property
    def m(self):
        return self.edges.shape[0]

    @property
    def degrees(self):
        return self._degrees

    @property
    def max_degree(self):
        return int(self._degrees.max()) if self.n else 0

    def neighbors(self, v):
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v):
        return int(self._degrees[v])

    def has_edge(self, u, v):
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < nb.size and nb[i] == v)

    @property
    def edge_keys(self):
        return self.edges[:, 0] * self.n + self.edges[:, 1]

    def adjacency(self, dtype=np.float64):
        a = np.zeros((self.n, self.n), dtype=dtype)
        a[self.edges[:, 0], self.edges[:, 1]] = 1
        a[self.edges[:, 1], self.edges[:, 0]] = 1
        return a

    def sparse_adjacency(self):
        data = np.ones(self.indices.size)
        return csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def subgraph(self, vertices):
        """Induced subgraph on ``vertices`` (relabelled in ascending order)."""
        keep = np.unique(np.asarray(vertices, dtype=np.int64))
        remap = np.full(self.n, -1, dtype=np.int64)
        remap[keep] = np.arange(keep.size)
        e = remap[self.edges]
        e = e[(e >= 0).all(axis=1)]
        return Graph(keep.size, _keys_to_pairs(np.sort(e[:, 0] * keep.size + e[:, 1]), keep.size)), keep

    def content_hash(self):
        h = hashlib.sha256()
        h.update(f"{self.n} {self.m}\n".encode())
        h.update(np.ascontiguousarray(self.edges, dtype="<i8").tobytes())
        return h.hexdigest()

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self):
        return hash(self.content_hash())

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(n, pairs):
    """Graph on ``n`` vertices from vertex pairs; duplicates and reversals collapse.

    Raises GraphError on out-of-range ids or self-loops.
    """
    n = int(n)
    if n < 0:
        raise GraphError("vertex count must be nonnegative")
    return Graph(n, _canonical_pairs(n, pairs, what="edge"))


def symmetric_difference(G, F):
    """``G△F``: pairs present in exactly one of ``E(G)`` and ``F``."""
    if isinstance(F, EdgeSet):
        if F.n != G.n:
            raise GraphError(f"edge set over n={F.n} does not match graph n={G.n}")
        fkeys = F.keys
    else:
        fkeys = EdgeSet(G.n, F).keys
    keys = np.setxor1d(G.edge_keys, fkeys, assume_unique=True)
    return Graph(G.n, _keys_to_pairs(keys, G.n))


class Cut:
    """A bipartition ``(S, V-S)`` stored as a read-only membership mask of ``S``."""

    __slots__ = ("mask",)

    def __init__(self, mask):
        m = np.array(mask, dtype=bool)
        m.setflags(write=False)
        self.mask = m

    @classmethod
    def from_members(cls, n, members):
        mask = np.zeros(int(n), dtype=bool)
        idx = np.asarray(list(members) if not isinstance(members, np.ndarray) else members, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= n):
            raise GraphError(f"cut member out of range for n={n}")
        mask[idx] = True
        return cls(mask)

    @property
    def n(self):
        return self.mask.size

    @property
    def members(self):
        return np.flatnonzero(self.mask)

    @property
    def size(self):
        return int(np.count_nonzero(self.mask))

    def complement(self):
        return Cut(~self.mask)

    def is_proper(self):
        return 0 < self.size < self.n

    def canonical(self):
        """The side containing vertex 0."""
        return self if self.n == 0 or self.mask[0] else self.complement()

    def __eq__(self, other):
        return isinstance(other, Cut) and np.array_equal(self.mask, other.mask)

    def __hash__(self):
        return hash(self.mask.tobytes())

    def __repr__(self):
        mem = self.members
        body = ", ".join(map(str, mem[:8])) + (", ..." if mem.size > 8 else "")
        return f"Cut(n={self.n}, S={{{body}}})"


def as_cut(n, S):
    if isinstance(S, Cut):
        if S.n != n:
            raise GraphError(f"cut over n={S.n} does not match n={n}")
        return S
    arr = np.asarray(S)
    if arr.dtype == bool and arr.size == n:
        return Cut(arr)
    return Cut.from_members(n, arr.ravel() if arr.size else [])


def _proper(G, S):
    S = as_cut(G.n, S)
    if not S.is_proper():
        raise DegenerateCutError(f"cut with |S|={S.size} on n={G.n} has an empty side")
    return S


def cut_edges(G, S):
    """Number of edges with exactly one endpoint in ``S``."""
    S = _proper(G, S)
    m = S.mask
    return int(np.count_nonzero(m[G.edges[:, 0]] != m[G.edges[:, 1]]))


def cut_ratio_alpha(G, S, exact=False):
    """``e(S, V-S) / (|S| |V-S|)``; a Fraction when ``exact``."""
    S = _proper(G, S)
    e = cut_edges(G, S)
    den = S.size * (G.n - S.size)
    return Fraction(e, den) if exact else e / den


def cut_ratio_alpha_prime(G, S, exact=False):
    """``e(S, V-S) / min(|S|, |V-S|)``."""
    S = _proper(G, S)
    e = cut_edges(G, S)
    den = min(S.size, G.n - S.size)
    return Fraction(e, den) if exact else e / den


def d_size(S, T):
    """Partition distance ``min(2|S△T|, 2|S△(V-T)|)``; even, at most ``n``."""
    if not isinstance(S, Cut) or not isinstance(T, Cut):
        raise TypeError("d_size expects two Cut objects")
    if S.n != T.n:
        raise GraphError(f"cuts over different vertex counts ({S.n} vs {T.n})")
    x = int(np.count_nonzero(S.mask ^ T.mask))
    return 2 * min(x, S.n - x)


def brute_force_min_cut(G, limit=BRUTE_FORCE_LIMIT):
    """Exact minimum cut-ratio by enumerating all ``2^(n-1) - 1`` bipartitions.

    The returned side contains vertex 0; among optimal cuts the one with the
    lexicographically smallest sorted member list wins.
    """
    if G.n > limit:
        raise GraphError(f"brute force limited to n <= {limit}, got n={G.n}")
    if G.n < 2:
        raise DegenerateCutError("need at least two vertices for a cut")
    if G.n > 62:
        raise GraphError("bitmask enumeration needs n <= 62")
    adj = np.zeros(G.n, dtype=np.int64)
    for u, v in G.edges:
        adj[u] |= 1 << int(v)
        adj[v] |= 1 << int(u)
    mask, e, size = kernels.brute_force_cut(G.n, adj)
    S = Cut(np.array([(mask >> k) & 1 for k in range(G.n)], dtype=bool))
    return S, e / (size * (G.n - size))


def connected_components(G):
    """Vertex sets of the components, largest first, ties by smallest vertex."""
    if G.n == 0:
        return []
    k, labels = _cc(G.sparse_adjacency(), directed=False)
    comps = [np.flatnonzero(labels == c) for c in range(k)]
    comps.sort(key=lambda c: (-c.size, int(c[0])))
    return comps


def is_connected(G):
    return G.n <= 1 or len(connected_components(G)) == 1


def largest_component(G):
    """(subgraph, original vertex ids) of the largest component."""
    comps = connected_components(G)
    if not comps:
        return G, np.arange(0)
    if len(comps) == 1:
        return G, np.arange(G.n)
    return G.subgraph(comps[0])


# small named families used in tests, docs and the CLI
def path_graph(n):
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n):
    return build_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def barbell_graph(k):
    """Two ``k``-cliques ``{0..k-1}`` and ``{k..2k-1}`` joined by edge ``(k-1, k)``."""
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    pairs += [(k + i, k + j) for i in range(k) for j in range(i + 1, k)]
    pairs.append((k - 1, k))
    return build_graph(2 * k, pairs)
