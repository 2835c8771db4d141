"""Pure-numpy versions of the kernels in :mod:`rrspectral.kernels.loops`."""
import math
from fractions import Fraction

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)
TWO_M53 = 1.0 / 9007199254740992.0


def mix64(z):
    z = np.asarray(z, dtype=np.uint64)
    z = (z ^ (z >> np.uint64(30))) * MIX1
    z = (z ^ (z >> np.uint64(27))) * MIX2
    return z ^ (z >> np.uint64(31))


def uniforms(seed, start, count):
    ctr = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = mix64(np.uint64(seed) + ctr * GOLDEN)
    return ((z >> np.uint64(11)).astype(np.float64) + 1.0) * TWO_M53


def _skips(u, logq):
    # floor(log(u) / logq) bit-identical to libm: np.log may differ from libm
    # by one ulp, which only matters when the ratio sits next to an integer.
    ratio = np.log(u) / logq
    fl = np.floor(ratio)
    risky = (ratio - fl < 1e-9 * np.maximum(1.0, ratio)) | (fl + 1.0 - ratio < 1e-9 * np.maximum(1.0, ratio))
    if risky.any():
        idx = np.flatnonzero(risky)
        fl[idx] = [math.floor(math.log(x) / logq) for x in u[idx]]
    return fl


def skip_sample(total, p, seed):
    logq = math.log1p(-p)
    batch = int(min(max(1024, 1.25 * p * total + 64), 1 << 22))
    chunks = []
    pos = 0.0  # next candidate index
    counter = 0
    while pos < total:
        u = uniforms(seed, counter, batch)
        counter += batch
        gaps = _skips(u, logq) + 1.0
        emitted = pos - 1.0 + np.cumsum(gaps)
        keep = emitted < total
        chunks.append(emitted[keep].astype(np.int64))
        if not keep.all():
            break
        pos = emitted[-1] + 1.0
    if not chunks:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(chunks)


def sweep_cuts(order, indptr, indices):
    n = order.shape[0]
    if n < 2:
        return np.empty(0, dtype=np.int64)
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    rows = np.repeat(np.arange(n), np.diff(indptr))
    upper = rows < indices
    a = pos[rows[upper]]
    b = pos[indices[upper]]
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    diff = np.bincount(lo + 1, minlength=n + 1) - np.bincount(hi + 1, minlength=n + 1)
    return np.cumsum(diff)[1:n].astype(np.int64)


def best_prefix(cuts, n):
    i = np.arange(1, n, dtype=np.int64)
    den = i * (n - i)
    ratio = cuts / den
    lo = ratio.min()
    cand = np.flatnonzero(ratio <= lo * (1 + 1e-9) + 1e-300)
    best = min(cand, key=lambda j: (Fraction(int(cuts[j]), int(den[j])), j))
    return int(best) + 1


def brute_force_cut(n, adj):
    m = np.arange(1 << (n - 1), dtype=np.int64)
    s = 1 | (m << 1)
    s = s[s != (1 << n) - 1]
    bits = ((s[:, None] >> np.arange(n)) & 1).astype(np.int64)
    size = bits.sum(axis=1)
    u, v = np.nonzero(np.triu(((adj[:, None] >> np.arange(n)) & 1).astype(bool), 1))
    e = (bits[:, u] ^ bits[:, v]).sum(axis=1) if u.size else np.zeros(s.size, dtype=np.int64)
    den = size * (n - size)
    ratio = e / den
    lo = ratio.min()
    cand = np.flatnonzero(ratio <= lo * (1 + 1e-9) + 1e-300)
    exact = {j: Fraction(int(e[j]), int(den[j])) for j in cand}
    best_val = min(exact.values())
    winners = [j for j in cand if exact[j] == best_val]

    def members(j):
        return [k for k in range(n) if (s[j] >> k) & 1]

    j = min(winners, key=members)
    return int(s[j]), int(e[j]), int(size[j])


def householder_tridiag(a):
    """Vectorised Householder reduction; same outputs/conventions as the loop kernel."""
    n = a.shape[0]
    t = a.copy()
    q = np.eye(n)
    for k in range(n - 2):
        x = t[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        if x[0] > 0:
            alpha = -alpha
        v = x.copy()
        v[0] -= alpha
        vn = np.linalg.norm(v)
        if vn == 0.0:
            continue
        v /= vn
        sub = t[k + 1:, k:]
        sub -= 2.0 * np.outer(v, v @ sub)
        sub = t[k:, k + 1:]
        sub -= 2.0 * np.outer(sub @ v, v)
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v)
    d = np.diag(t).copy()
    e = np.zeros(n)
    if n > 1:
        e[1:] = np.diag(t, -1)
    a[:, :] = q
    return d, e


def implicit_ql(d, e, z, max_iter):
    n = d.shape[0]
    e[:-1] = e[1:]
    if n > 0:
        e[n - 1] = 0.0
    total = 0
    eps = np.finfo(float).eps
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                if abs(e[m]) <= eps * (abs(d[m]) + abs(d[m + 1])):
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
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
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
                zi = z[:, i].copy()
                z[:, i] = c * zi - s * z[:, i + 1]
                z[:, i + 1] = s * zi + c * z[:, i + 1]
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return total
