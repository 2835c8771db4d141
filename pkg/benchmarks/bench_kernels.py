"""Time the numba kernels against the numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both modules are imported directly, so the environment switch does not
matter here. The first numba call per kernel (compilation or cache load) is
excluded by a warm-up run. Outputs are checked for equality before timing.
"""
import argparse
import timeit

import numpy as np

from rrspectral._accel import HAS_NUMBA
from rrspectral.generators import planted_partition, sbm
from rrspectral.kernels import loops, vectorized
from rrspectral.spectral import laplacian, laplacian_spectrum


def _adj_masks(G):
    adj = np.zeros(G.n, dtype=np.int64)
    for u, v in G.edges:
        adj[u] |= 1 << int(v)
        adj[v] |= 1 << int(u)
    return adj


def _tridiag(mod, a):
    z = np.array(a, dtype=np.float64, copy=True)
    d, e = mod.householder_tridiag(z)
    if mod.implicit_ql(d, e, z, 50 * len(d)) < 0:
        raise RuntimeError("QL did not converge")
    return np.sort(d)


def cases():
    G = sbm(planted_partition((500, 500), 0.2, 0.02), 1)
    order = np.argsort(laplacian_spectrum(G, k=3).vectors[:, 1], kind="stable").astype(np.int64)
    indptr, indices = G.indptr.astype(np.int64), G.indices.astype(np.int64)
    small = sbm(planted_partition((9, 9), 0.6, 0.1), 2)
    adj = _adj_masks(small)
    L = laplacian(sbm(planted_partition((100, 100), 0.3, 0.05), 3))
    total = 2000 * 1999 // 2
    return [
        ("uniforms 1e6", lambda m: m.uniforms(np.uint64(7), 0, 1_000_000)),
        ("skip_sample n=2000 p=0.01", lambda m: m.skip_sample(total, 0.01, np.uint64(7))),
        ("sweep_cuts n=1000", lambda m: m.sweep_cuts(order, indptr, indices)),
        ("brute_force_cut n=18", lambda m: m.brute_force_cut(small.n, adj)),
        ("tridiagonal QL n=200", lambda m: _tridiag(m, L)),
    ]


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray) and a.dtype.kind == "f":
        return np.allclose(a, b, rtol=0, atol=1e-9)
    return np.array_equal(a, b)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not HAS_NUMBA:
        print("numba not importable: both columns run the plain python loops")
    print(f"{'kernel':28s} {'numba ms':>10s} {'numpy ms':>10s} {'speedup':>8s}")
    for name, fn in cases():
        a, b = fn(loops), fn(vectorized)  # warm-up and equality check
        if not _same(a, b):
            raise SystemExit(f"{name}: backends disagree")
        t_nb = min(timeit.repeat(lambda: fn(loops), number=1, repeat=args.repeat)) * 1e3
        t_np = min(timeit.repeat(lambda: fn(vectorized), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:28s} {t_nb:10.2f} {t_np:10.2f} {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
