"""Scalar-loop kernels compiled with numba (plain Python when numba is absent).

Every function here has a vectorised twin in :mod:`rrspectral.kernels.vectorized`
with identical outputs; :mod:`rrspectral.kernels` picks one at import time.
"""
import math

import numpy as np

from .._accel import njit

# SplitMix64 constants (Steele, Lea, Flood 2014).
GOLDEN = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)
TWO_M53 = 1.0 / 9007199254740992.0


@njit
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * MIX1
    z = (z ^ (z >> np.uint64(27))) * MIX2
    return z ^ (z >> np.uint64(31))


@njit
def _uniform(seed, counter):
    # counter-th output of the SplitMix64 stream, mapped to (0, 1]
    z = _mix64(seed + (counter + np.uint64(1)) * GOLDEN)
    return (float(z >> np.uint64(11)) + 1.0) * TWO_M53


@njit
def uniforms(seed, start, count):
    out = np.empty(count, dtype=np.float64)
    s = np.uint64(seed)
    for i in range(count):
        out[i] = _uniform(s, np.uint64(start + i))
    return out


@njit
def skip_sample(total, p, seed):
    """Indices in ``[0, total)`` kept independently with probability ``p``.

    Uses geometric skips so the cost is proportional to the output size.
    ``0 < p < 1`` is the caller's responsibility.
    """
    logq = math.log1p(-p)
    cap = 16
    out = np.empty(cap, dtype=np.int64)
    k = 0
    pos = 0
    counter = 0
    s = np.uint64(seed)
    ftotal = float(total)
    while True:
        u = _uniform(s, np.uint64(counter))
        counter += 1
        skip = math.floor(math.log(u) / logq)
        if float(pos) + skip >= ftotal:
            break
        pos += int(skip)
        if k == cap:
            cap *= 2
            grown = np.empty(cap, dtype=np.int64)
            grown[:k] = out[:k]
            out = grown
        out[k] = pos
        k += 1
        pos += 1
        if pos >= total:
            break
    return out[:k].copy()


@njit
def sweep_cuts(order, indptr, indices):
    """Crossing-edge counts of every prefix ``order[:i]``, ``i = 1..n-1``."""
    n = order.shape[0]
    pos = np.empty(n, dtype=np.int64)
    for i in range(n):
        pos[order[i]] = i
    cuts = np.empty(max(n - 1, 0), dtype=np.int64)
    cut = 0
    for i in range(n - 1):
        v = order[i]
        inside = 0
        for j in range(indptr[v], indptr[v + 1]):
            if pos[indices[j]] < i:
                inside += 1
        cut += (indptr[v + 1] - indptr[v]) - 2 * inside
        cuts[i] = cut
    return cuts


@njit
def best_prefix(cuts, n):
    """Smallest ``i`` minimising ``cuts[i-1] / (i (n-i))``, compared exactly."""
    best = 1
    be = cuts[0]
    bd = n - 1
    for i in range(2, n):
        e = cuts[i - 1]
        d = i * (n - i)
        if e * bd < be * d:
            best = i
            be = e
            bd = d
    return best


@njit
def _popcount(x):
    x = x - ((x >> 1) & 0x5555555555555555)
    x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
    return (x * 0x0101010101010101) >> 56 & 0xFF


@njit
def _lex_less(a, b):
    # sorted member lists of bitmasks a, b compared lexicographically
    d = a ^ b
    if d == 0:
        return False
    low = d & -d
    if a & low:
        return (b & ~(low | (low - 1))) != 0
    return (a & ~(low | (low - 1))) == 0


@njit
def brute_force_cut(n, adj):
    """Exhaustive minimum of e(S, V-S) / (|S| |V-S|) over cuts with 0 in S.

    ``adj[u]`` is the neighbour bitmask of ``u``. Returns (mask, edges, size).
    """
    full = (1 << n) - 1
    best_mask = -1
    be = 0
    bd = 1
    bs = 0
    for m in range(1 << (n - 1)):
        s = 1 | (m << 1)
        if s == full:
            continue
        size = _popcount(s)
        e = 0
        for u in range(n):
            if (s >> u) & 1:
                e += _popcount(adj[u] & ~s & full)
        d = size * (n - size)
        if best_mask < 0 or e * bd < be * d or (e * bd == be * d and _lex_less(s, best_mask)):
            best_mask = s
            be = e
            bd = d
            bs = size
    return best_mask, be, bs


@njit
def householder_tridiag(a):
    """Reduce symmetric ``a`` in place to tridiagonal form, accumulating Q.

    Returns (diag, sub) with ``sub[0] = 0`` and ``sub[i]`` coupling i-1 and i;
    afterwards ``a`` holds the orthogonal transform.
    """
    n = a.shape[0]
    d = np.zeros(n)
    e = np.zeros(n)
    for i in range(n - 1, 0, -1):
        l = i - 1
        h = 0.0
        scale = 0.0
        if l > 0:
            for k in range(l + 1):
                scale += abs(a[i, k])
            if scale == 0.0:
                e[i] = a[i, l]
            else:
                for k in range(l + 1):
                    a[i, k] /= scale
                    h += a[i, k] * a[i, k]
                f = a[i, l]
                g = -math.sqrt(h) if f >= 0.0 else math.sqrt(h)
                e[i] = scale * g
                h -= f * g
                a[i, l] = f - g
                f = 0.0
                for j in range(l + 1):
                    a[j, i] = a[i, j] / h
                    g = 0.0
                    for k in range(j + 1):
                        g += a[j, k] * a[i, k]
                    for k in range(j + 1, l + 1):
                        g += a[k, j] * a[i, k]
                    e[j] = g / h
                    f += e[j] * a[i, j]
                hh = f / (h + h)
                for j in range(l + 1):
                    f = a[i, j]
                    g = e[j] - hh * f
                    e[j] = g
                    for k in range(j + 1):
                        a[j, k] -= f * e[k] + g * a[i, k]
        else:
            e[i] = a[i, l]
        d[i] = h
    d[0] = 0.0
    e[0] = 0.0
    for i in range(n):
        if d[i] != 0.0:
            for j in range(i):
                g = 0.0
                for k in range(i):
                    g += a[i, k] * a[k, j]
                for k in range(i):
                    a[k, j] -= g * a[k, i]
        d[i] = a[i, i]
        a[i, i] = 1.0
        for j in range(i):
            a[j, i] = 0.0
            a[i, j] = 0.0
    return d, e


@njit
def implicit_ql(d, e, z, max_iter):
    """Implicit-shift QL on a tridiagonal matrix, rotating the columns of ``z``.

    ``d``/``e`` as returned by :func:`householder_tridiag`. Returns the total
    number of QL sweeps, or -1 when ``max_iter`` is exhausted.
    """
    n = d.shape[0]
    for i in range(1, n):
        e[i - 1] = e[i]
    if n > 0:
        e[n - 1] = 0.0
    total = 0
    eps = 2.220446049250313e-16
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            total += 1
            if total > max_iter:
                return -1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                for k in range(n):
                    f = z[k, i + 1]
                    z[k, i + 1] = s * z[k, i] + c * f
                    z[k, i] = c * z[k, i] - s * f
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return total
