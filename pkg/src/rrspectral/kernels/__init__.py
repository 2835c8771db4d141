"""Hot numeric kernels with a numba path and a pure-numpy path.

Both paths return identical results; the choice only affects speed. See
:mod:`rrspectral._accel` for the environment switch.
"""
import numpy as np

from .._accel import USE_NUMBA, backend_name
from . import loops, vectorized

_impl = loops if USE_NUMBA else vectorized


def uniforms(seed, start, count):
    """``count`` SplitMix64 uniforms in (0, 1] from stream ``seed`` at ``start``."""
    return _impl.uniforms(np.uint64(seed), int(start), int(count))


def skip_sample(total, p, seed):
    total = int(total)
    if total <= 0 or p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(total, dtype=np.int64)
    return _impl.skip_sample(total, float(p), np.uint64(seed))


def sweep_cuts(order, indptr, indices):
    return _impl.sweep_cuts(
        np.ascontiguousarray(order, dtype=np.int64),
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
    )


def best_prefix(cuts, n):
    return int(_impl.best_prefix(np.ascontiguousarray(cuts, dtype=np.int64), int(n)))


def brute_force_cut(n, adj):
    mask, e, size = _impl.brute_force_cut(int(n), np.ascontiguousarray(adj, dtype=np.int64))
    return int(mask), int(e), int(size)


def tridiagonal_eigh(a, max_iter):
    """All eigenpairs of symmetric ``a`` via Householder + implicit-shift QL.

    Returns (values, vectors, sweeps); ``sweeps == -1`` signals non-convergence.
    Values are unsorted.
    """
    z = np.array(a, dtype=np.float64, copy=True, order="C")
    d, e = _impl.householder_tridiag(z)
    sweeps = _impl.implicit_ql(d, e, z, int(max_iter))
    return d, z, int(sweeps)


__all__ = [
    "backend_name",
    "uniforms",
    "skip_sample",
    "sweep_cuts",
    "best_prefix",
    "brute_force_cut",
    "tridiagonal_eigh",
]
