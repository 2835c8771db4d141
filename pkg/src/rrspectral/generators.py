"""Random graph families and the expected-Laplacian algebra of the 3-block family.

Blocks are contiguous vertex ranges in the order given. Sampling is
seed-deterministic; every block pair draws from its own derived stream.
"""
from dataclasses import dataclass
import math

import numpy as np

from .errors import GraphError
from .graph import Graph, _keys_to_pairs
from .sampling import SALT_BLOCK, bernoulli_indices, derive_seed, index_to_pairs, n_pairs
from .spectral import smallest_eigenpairs

DENSE_LIMIT = 4000


def _pairs_graph(n, chunks):
    if chunks:
        pairs = np.concatenate(chunks)
    else:
        pairs = np.empty((0, 2), dtype=np.int64)
    keys = np.sort(pairs[:, 0] * n + pairs[:, 1])
    return Graph(n, _keys_to_pairs(keys, n))


def erdos_renyi(n, p, seed):
    """G(n, p): every pair independently with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"edge probability must lie in [0, 1], got {p}")
    idx = bernoulli_indices(n_pairs(n), p, seed)
    return _pairs_graph(n, [index_to_pairs(n, idx)])


@dataclass(frozen=True)
class BlockModelSpec:
    sizes: tuple
    probs: tuple  # symmetric K x K, nested tuples

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        P = np.asarray(self.probs, dtype=float)
        k = len(sizes)
        if k == 0 or any(s <= 0 for s in sizes):
            raise GraphError("block sizes must be positive")
        if P.shape != (k, k):
            raise GraphError(f"probability matrix must be {k}x{k}")
        if not np.array_equal(P, P.T):
            raise GraphError("probability matrix must be symmetric")
        if (P < 0).any() or (P > 1).any():
            raise GraphError("block probabilities must lie in [0, 1]")
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "probs", tuple(tuple(float(x) for x in row) for row in P))

    @property
    def n(self):
        return sum(self.sizes)

    @property
    def matrix(self):
        return np.array(self.probs)

    @property
    def offsets(self):
        return np.concatenate([[0], np.cumsum(self.sizes)]).astype(np.int64)

    def labels(self):
        return np.repeat(np.arange(len(self.sizes)), self.sizes)


def planted_partition(sizes, p_in, p_out):
    k = len(sizes)
    P = [[p_in if a == b else p_out for b in range(k)] for a in range(k)]
    return BlockModelSpec(tuple(sizes), tuple(map(tuple, P)))


def sbm(spec, seed):
    """Stochastic block model sample."""
    off = spec.offsets
    P = spec.matrix
    K = len(spec.sizes)
    chunks = []
    for a in range(K):
        for b in range(a, K):
            s = derive_seed(seed, a * K + b, salt=SALT_BLOCK)
            sa, sb = spec.sizes[a], spec.sizes[b]
            if a == b:
                idx = bernoulli_indices(n_pairs(sa), P[a, a], s)
                chunks.append(index_to_pairs(sa, idx) + off[a])
            else:
                idx = bernoulli_indices(sa * sb, P[a, b], s)
                chunks.append(np.stack([off[a] + idx // sb, off[b] + idx % sb], axis=1))
    return _pairs_graph(spec.n, chunks)


@dataclass(frozen=True)
class NegativeFamilySpec:
    """Three blocks A, B, C whose sweep cut is unstable under heavy flipping.

    ``|A| = round(beta n)``, ``|C| = round((1-beta) n / 2)``, ``B`` takes the
    rest. Block rates (natural log): A-A and C-C ``400 ln^2 n / n``, B-B
    ``ln n / n``, B-C ``20 ln n / n``, A-(B u C) ``1 / (10 n)``.
    """

    n: int
    beta: float

    def __post_init__(self):
        if not 0.1 < self.beta < 0.5:
            raise GraphError(f"beta must lie in (1/10, 1/2), got {self.beta}")
        a, b, c = self.sizes
        if min(a, b, c) < 1:
            raise GraphError(f"n={self.n} too small for three nonempty blocks")

    @property
    def sizes(self):
        a = int(math.floor(self.beta * self.n + 0.5))
        c = int(math.floor((1 - self.beta) * self.n / 2 + 0.5))
        return a, self.n - a - c, c

    def rates(self):
        n = self.n
        ln = math.log(n)
        return {
            "AA": 400 * ln**2 / n,
            "BB": ln / n,
            "CC": 400 * ln**2 / n,
            "BC": 20 * ln / n,
            "A-BC": 1 / (10 * n),
        }

    def rate_matrix(self, clamp=False):
        r = self.rates()
        P = np.array(
            [
                [r["AA"], r["A-BC"], r["A-BC"]],
                [r["A-BC"], r["BB"], r["BC"]],
                [r["A-BC"], r["BC"], r["CC"]],
            ]
        )
        return np.minimum(P, 1.0) if clamp else P

    def labels(self):
        return np.repeat(np.arange(3), self.sizes)

    def min_sampling_n(self):
        """Smallest ``n`` for which every rate is a probability."""
        n = 3
        while 400 * math.log(n) ** 2 / n > 1:
            n = int(n * 1.1) + 1
        lo, hi = n // 2, n
        while lo < hi:
            mid = (lo + hi) // 2
            if 400 * math.log(mid) ** 2 / mid <= 1:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def as_block_model(self, clamp=False):
        """Sampling model; rates above 1 are an error unless ``clamp`` is asked for."""
        P = self.rate_matrix(clamp=clamp)
        if (P > 1).any():
            raise GraphError(
                f"block rate {P.max():.3g} > 1 at n={self.n}; sampling needs n >= {self.min_sampling_n()}"
            )
        return BlockModelSpec(self.sizes, tuple(map(tuple, P)))


def negative_family(spec, seed, clamp=False):
    """Sample the 3-block family.

    Rejects ``n`` where a rate exceeds 1 (below roughly 46000). ``clamp=True``
    caps the rates at 1 instead, which samples a different, explicitly
    requested family.
    """
    return sbm(spec.as_block_model(clamp=clamp), seed)


def expected_adjacency(sizes, P):
    labels = np.repeat(np.arange(len(sizes)), sizes)
    A = np.asarray(P, dtype=float)[labels][:, labels]
    np.fill_diagonal(A, 0.0)
    return A


def expected_laplacian(sizes, P):
    """Block-model ``E[D] - E[A]``.

    Each diagonal entry is the correctly rounded sum of its row's
    off-diagonal weights, so every row sums to zero up to one rounding.
    """
    P = np.asarray(P, dtype=float)
    L = -expected_adjacency(sizes, P)
    deg = np.empty(len(sizes))
    for a in range(len(sizes)):
        counts = np.array(sizes) - (np.arange(len(sizes)) == a)
        deg[a] = math.fsum(np.repeat(P[a], counts))
    L[np.diag_indices_from(L)] = np.repeat(deg, sizes)
    return L


def expected_laplacian_negative(spec):
    """``E[D] - E[A]`` of the 3-block family, built densely.

    The block rates enter as expected edge weights and are not clamped, so the
    identity holds for any ``n`` (sampling itself needs every rate <= 1).
    """
    if spec.n > DENSE_LIMIT:
        raise GraphError(f"dense expected Laplacian capped at n={DENSE_LIMIT}")
    return expected_laplacian(spec.sizes, spec.rate_matrix())


def expected_max_degree(sizes, P):
    sizes = np.asarray(sizes, dtype=float)
    P = np.asarray(P, dtype=float)
    deg = P @ sizes - np.diag(P)
    return float(deg.max())


def expected_flipped_laplacian(EL, p, n=None):
    """``p n (I - J/n) + (1 - 2p) EL``: expected Laplacian after flipping."""
    EL = np.asarray(EL, dtype=float)
    n = EL.shape[0] if n is None else int(n)
    if EL.shape != (n, n):
        raise ValueError("matrix shape does not match n")
    if not 0.0 <= p <= 0.5:
        raise ValueError(f"flip probability must lie in [0, 0.5], got {p}")
    rows = np.abs(EL.sum(axis=1)).max(initial=0.0)
    if rows > 1e-9 * max(1.0, np.abs(EL).max(initial=0.0)) * n:
        raise ValueError("input must have zero row sums")
    out = (1 - 2 * p) * EL - p
    out[np.diag_indices(n)] += p * n
    return out


def block_spectrum(sizes, P):
    """Exact spectrum of a block-constant expected Laplacian, without forming it.

    Block-constant vectors give the eigenvalues of a ``K x K`` quotient
    matrix; zero-sum vectors inside block ``a`` all share eigenvalue
    ``deg_a + P_aa`` (multiplicity ``|a| - 1``). Returns the sorted spectrum
    of length ``sum(sizes)``.
    """
    s = np.asarray(sizes, dtype=float)
    P = np.asarray(P, dtype=float)
    deg = P @ s - np.diag(P)
    root = np.sqrt(s)
    Q = -P * np.outer(root, root)
    Q[np.diag_indices_from(Q)] = deg - np.diag(P) * (s - 1)
    vals = list(np.linalg.eigvalsh(Q))
    for a, size in enumerate(sizes):
        vals.extend([deg[a] + P[a, a]] * (int(size) - 1))
    return np.sort(np.array(vals))


def _ratio(lam2, lam3, p, n):
    return (p * n + (1 - 2 * p) * lam2) / (p * n + (1 - 2 * p) * lam3)


def eigenvalue_ratio_curve(spec, p_grid, base=None):
    """``[(p, lambda2/lambda3 of E[L_{G△F}])]`` over ``p_grid``.

    Uses the shift identity ``lambda_i = p n + (1-2p) lambda_i(E[L_G])`` for
    ``i >= 2`` on the dense base spectrum (pass ``base=(lambda2, lambda3)``
    to skip the eigensolve).
    """
    ps = [float(p) for p in p_grid]
    if any(not 0.0 <= p <= 0.5 for p in ps):
        raise ValueError("grid entries must lie in [0, 0.5]")
    if base is None:
        sp = smallest_eigenpairs(expected_laplacian_negative(spec), 3)
        base = (sp[1], sp[2])
    lam2, lam3 = base
    return [(p, _ratio(lam2, lam3, p, spec.n)) for p in ps]


def shift_identity_residuals(EL, p_grid, k=5):
    """Per ``p``: ``max_i |lambda_i(flipped) - (p n + (1-2p) lambda_i(EL))|`` for ``i = 2..k``.

    Also returns the flipped ``lambda_1``. Each flipped matrix is solved
    afresh, so this checks the identity rather than assuming it.
    """
    n = EL.shape[0]
    base = smallest_eigenpairs(EL, k).values
    out = []
    for p in p_grid:
        got = smallest_eigenpairs(expected_flipped_laplacian(EL, p), k).values
        want = p * n + (1 - 2 * p) * base[1:]
        out.append((float(p), float(np.abs(got[1:] - want).max()), float(got[0])))
    return out


def block_constant_estimates(spec):
    """Leading-order values from block-constant test vectors, for comparison logs.

    ``lambda3`` here is the B-C separating mode; the true third eigenvalue is
    the smaller within-B mode, so these are not assertions.
    """
    n, b = spec.n, spec.beta
    ln = math.log(n)
    return {
        "lambda3_block_mode": 20 * (1 - b) * ln,
        "max_degree_leading": max(400 * b, 200 * (1 - b)) * ln**2,
    }
