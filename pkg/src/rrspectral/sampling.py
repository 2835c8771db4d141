"""Seeded random streams and the linear order on vertex pairs.

All randomness in the package comes from one counter-based generator: the
``j``-th uniform of stream ``seed`` is ``SplitMix64(seed + (j+1)·γ)`` mapped to
(0, 1]. Bernoulli(p) subsets of an index range are drawn by geometric skips,
so the cost is proportional to the number of selected indices.

Pairs ``(u, v)`` with ``u < v`` are numbered row by row: ``(0,1), (0,2), ...,
(0,n-1), (1,2), ...``.
"""
import numpy as np

from . import kernels

GENERATOR_ID = "splitmix64-geometric-skip/v1"

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
# domain-separation salts for derived seeds (hex digits of pi)
SALT_P = 0x243F6A8885A308D3
SALT_TRIAL = 0x13198A2E03707344
SALT_BLOCK = 0xA4093822299F31D0


def mix64(z):
    """SplitMix64 finaliser on a Python int (mod 2^64)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def normalize_seed(seed):
    return int(seed) & MASK64


def derive_seed(base_seed, *indices, salt=SALT_TRIAL):
    """Independent child seed for ``(base_seed, i1, i2, ...)``.

    ``derive_seed(b, p_index, trial)`` is the per-trial seed of a sweep:
    ``s = mix(b); s = mix(s ^ mix(p_index + SALT_P)); s = mix(s ^ mix(trial + SALT_TRIAL))``.
    """
    s = mix64(normalize_seed(base_seed) + GOLDEN)
    salts = (SALT_P, salt) if len(indices) == 2 else (salt,) * len(indices)
    for idx, st in zip(indices, salts):
        s = mix64(s ^ mix64(int(idx) + st))
    return s


def trial_seed(base_seed, p_index, trial):
    return derive_seed(base_seed, p_index, trial)


def uniforms(seed, count, start=0):
    return kernels.uniforms(normalize_seed(seed), start, count)


def bernoulli_indices(total, p, seed):
    """Sorted indices in ``[0, total)``, each kept independently with probability ``p``."""
    return kernels.skip_sample(int(total), float(p), normalize_seed(seed))


def n_pairs(n):
    return n * (n - 1) // 2


def pair_offsets(n):
    """``offsets[u]`` = index of pair ``(u, u+1)``."""
    u = np.arange(n, dtype=np.int64)
    return u * (2 * n - u - 1) // 2


def pair_index(n, u, v):
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    lo, hi = np.minimum(u, v), np.maximum(u, v)
    return lo * (2 * n - lo - 1) // 2 + (hi - lo - 1)


def index_to_pairs(n, idx):
    idx = np.asarray(idx, dtype=np.int64)
    off = pair_offsets(n)
    u = np.searchsorted(off, idx, side="right") - 1
    v = idx - off[u] + u + 1
    return np.stack([u, v], axis=1) if idx.size else np.empty((0, 2), dtype=np.int64)
