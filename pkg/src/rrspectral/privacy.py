"""Randomized response on graph edges and its closed-form companions.

The mechanism toggles every vertex pair independently with probability
``p <= 1/2`` and publishes ``G△F``. Running spectral clustering on the output
is edge-differentially private with budget ``ln((1-p)/p)``.
"""
from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from .errors import RRSpectralError
from .graph import EdgeSet, symmetric_difference
from .sampling import GENERATOR_ID, bernoulli_indices, index_to_pairs, n_pairs, normalize_seed
from .spectral import laplacian_spectrum


class NoPrivacyError(RRSpectralError, ValueError):
    """``p = 0`` publishes the graph unchanged: the budget is infinite."""


def _check_p(p):
    if not 0.0 <= p <= 0.5:
        raise ValueError(f"flip probability must lie in [0, 0.5], got {p}")


@dataclass(frozen=True)
class FlipSample:
    """Pairs toggled by one run of the mechanism, with what produced them."""

    F: EdgeSet
    p: float
    seed: int
    n: int
    generator: str = GENERATOR_ID

    def __len__(self):
        return len(self.F)


def flip_sample(n, p, seed):
    """Each of the ``C(n,2)`` pairs independently with probability ``p``.

    Deterministic in ``(n, p, seed)``; see :mod:`rrspectral.sampling` for the
    generator and pair order.
    """
    _check_p(p)
    seed = normalize_seed(seed)
    idx = bernoulli_indices(n_pairs(n), p, seed)
    F = EdgeSet._from_keys(n, _pairs_to_keys(n, index_to_pairs(n, idx)))
    return FlipSample(F=F, p=float(p), seed=seed, n=int(n))


def _pairs_to_keys(n, pairs):
    return pairs[:, 0] * n + pairs[:, 1]


def apply_randomized_response(G, p, seed):
    """``(G△F, sample)`` for a fresh flip sample."""
    sample = flip_sample(G.n, p, seed)
    return symmetric_difference(G, sample.F), sample


@dataclass(frozen=True)
class PrivacyBudget:
    epsilon: float
    p: float

    @property
    def likelihood_ratio(self):
        return (1 - self.p) / self.p


def privacy_budget(p):
    """Tight edge-DP budget ``ln((1-p)/p)`` of the mechanism."""
    if p == 0:
        raise NoPrivacyError("p = 0 gives no privacy (infinite budget)")
    _check_p(p)
    return PrivacyBudget(epsilon=math.log((1 - p) / p), p=float(p))


def output_probability(n, edges_in, edges_out, p):
    """Probability that the mechanism maps edge set ``edges_in`` to ``edges_out``.

    Exact when ``p`` is a Fraction. Edge sets are iterables of pairs.
    """
    a = {tuple(sorted(e)) for e in edges_in}
    b = {tuple(sorted(e)) for e in edges_out}
    flips = len(a ^ b)
    return p**flips * (1 - p) ** (n_pairs(n) - flips)


def expected_flipped_cut_ratio(alpha, p):
    """Mean cut-ratio of a fixed cut after flipping: ``(1-2p) alpha + p``."""
    return (1 - 2 * p) * alpha + p


def expected_ratio_gap(gamma, alpha_A, alpha_S, p):
    """Mean of ``gamma alpha_{G△F}(A) - alpha_{G△F}(S)``."""
    return (1 - 2 * p) * (gamma * alpha_A - alpha_S) + p * (gamma - 1)


def ratio_gap_tail_bound(gamma, alpha_A, alpha_S, eps, n):
    """Upper bound on ``Pr[gamma alpha_{G△F}(A) < alpha_{G△F}(S)]``.

    Valid when both cuts have every side of size at least ``eps n`` and ``S``
    is the minimum cut of ``G``. Returns 1 (vacuous) when
    ``gamma alpha_A <= alpha_S``.
    """
    if not gamma > 1:
        raise ValueError("gamma must exceed 1")
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    gap = gamma * alpha_A - alpha_S
    if gap <= 0:
        return 1.0
    return math.exp(-4 * gap**2 * eps**2 * n**2 / (25 * gamma**2))


def gamma0(G, spectrum=None):
    """``200 sqrt(Delta / lambda3)``, the ratio threshold of the min-cut argument."""
    if spectrum is None:
        spectrum = laplacian_spectrum(G, k=3)
    lam3 = spectrum[2]
    if lam3 <= 1e-9:
        raise ValueError(f"lambda3={lam3:.3g} is zero: three or more components")
    return gamma0_value(G.max_degree, lam3)


def gamma0_value(max_degree, lambda3):
    return 200 * math.sqrt(max_degree / lambda3)


def pair_likelihood_ratios(p):
    """All ratios ``P(out=b | in=x) / P(out=b | in=x')`` for one pair, ``x != x'``."""
    q = Fraction(p) if not isinstance(p, float) else p
    probs = {(x, b): (1 - q if x == b else q) for x in (0, 1) for b in (0, 1)}
    return [probs[(x, b)] / probs[(1 - x, b)] for x in (0, 1) for b in (0, 1)]


def flipped_edge_count_moments(n, p):
    """Mean and variance of ``|F|``: Binomial(C(n,2), p)."""
    N = n_pairs(n)
    return N * p, N * p * (1 - p)


def random_cut_ratio_samples(G, S, p, seeds):
    """``alpha_{G△F}(S)`` for each seed; the Monte Carlo side of the expectation check."""
    from .graph import cut_ratio_alpha

    out = np.empty(len(seeds))
    for i, s in enumerate(seeds):
        H, _ = apply_randomized_response(G, p, s)
        out[i] = cut_ratio_alpha(H, S)
    return out
