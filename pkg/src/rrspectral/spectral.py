"""Laplacian spectra and two-way spectral clustering by sweep cut."""
from dataclasses import dataclass, field
import math

import numpy as np
import scipy.linalg

from . import kernels
from .errors import DegenerateCutError, DisconnectedGraphError, NumericalError
from .graph import (
    BRUTE_FORCE_LIMIT,
    Cut,
    brute_force_min_cut,
    connected_components,
    cut_ratio_alpha,
)

DEFAULT_TOL = 1e-9
ZERO_TOL = 1e-7  # zero-eigenvalue classification


def laplacian(G):
    """Dense ``D - A`` as float64."""
    L = -G.adjacency()
    L[np.diag_indices(G.n)] = G.degrees
    return L


@dataclass(frozen=True)
class Spectrum:
    """The ``k`` smallest eigenpairs; ``vectors[:, i]`` belongs to ``values[i]``."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def k(self):
        return self.values.size

    def __getitem__(self, i):
        return float(self.values[i])

    def residuals(self, L):
        return np.linalg.norm(L @ self.vectors - self.vectors * self.values, axis=0)


def _fix_signs(vecs):
    for j in range(vecs.shape[1]):
        v = vecs[:, j]
        big = np.abs(v).max(initial=0.0)
        if big == 0.0:
            continue
        first = np.flatnonzero(np.abs(v) > 1e-12 * big)[0]
        if v[first] < 0:
            vecs[:, j] = -v
    return vecs


def smallest_eigenpairs(L, k, tol=DEFAULT_TOL, method="lapack"):
    """The ``k`` smallest eigenpairs of a symmetric matrix, deterministically.

    ``method="lapack"`` uses LAPACK's tridiagonal reduction with MRRR on the
    requested index range, falling back to a full divide-and-conquer solve
    when that result fails the residual check; ``method="ql"`` runs the package's own Householder
    + implicit-shift QL kernel on the full matrix. Eigenvector signs are fixed
    so the first non-negligible entry is positive.

    Raises NumericalError on non-convergence or if the result fails the
    residual / orthonormality checks at ``tol``.
    """
    L = np.asarray(L, dtype=np.float64)
    n = L.shape[0]
    if L.ndim != 2 or L.shape[1] != n:
        raise ValueError("expected a square matrix")
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must be in 1..{n}")
    scale = max(1.0, np.abs(L).max(initial=0.0))
    if np.abs(L - L.T).max(initial=0.0) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")

    if method == "lapack":
        try:
            vals, vecs = scipy.linalg.eigh(L, subset_by_index=[0, k - 1], driver="evr", check_finite=True)
            # MRRR on an index range can return non-orthogonal vectors for
            # degenerate clusters (e.g. isolated vertices); redo in full then
            bound = tol * max(1.0, abs(vals[-1]))
            if np.abs(L @ vecs - vecs * vals).max(initial=0.0) > bound:
                vals, vecs = scipy.linalg.eigh(L, driver="evd", check_finite=True)
                vals, vecs = vals[:k], vecs[:, :k]
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise NumericalError(f"LAPACK eigensolver failed: {exc}") from exc
        vecs = np.array(vecs, order="C")
    elif method == "ql":
        d, z, sweeps = kernels.tridiagonal_eigh(L, max_iter=50 * max(n, 1))
        if sweeps < 0:
            raise NumericalError(f"implicit QL did not converge within {50 * n} sweeps")
        order = np.argsort(d, kind="stable")[:k]
        vals, vecs = d[order], z[:, order]
    else:
        raise ValueError(f"unknown eigensolver method {method!r}")

    vecs = _fix_signs(np.ascontiguousarray(vecs))
    spec = Spectrum(values=np.asarray(vals, dtype=np.float64), vectors=vecs)

    bound = tol * max(1.0, abs(spec.values[-1]))
    res = spec.residuals(L)
    if res.max(initial=0.0) > bound:
        raise NumericalError(f"eigen-residual {res.max():.3e} exceeds {bound:.3e}")
    gram = vecs.T @ vecs
    if np.abs(gram - np.eye(k)).max(initial=0.0) > tol:
        raise NumericalError("eigenvectors failed the orthonormality check")
    return spec


def laplacian_spectrum(G, k=3, tol=DEFAULT_TOL, method="lapack"):
    return smallest_eigenpairs(laplacian(G), min(k, G.n), tol=tol, method=method)


@dataclass(frozen=True)
class SweepCut:
    """Full record of one sweep: the chosen cut plus everything that produced it."""

    cut: Cut
    index: int  # prefix length i0
    order: np.ndarray  # vertices sorted by Fiedler entry, ties by id
    prefix_cuts: np.ndarray  # crossing edges of order[:i], i = 1..n-1
    fiedler: np.ndarray
    spectrum: Spectrum
    connected: bool = True
    n_components: int = 1
    extra: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.order.size

    @property
    def edges_cut(self):
        return int(self.prefix_cuts[self.index - 1])

    @property
    def alpha(self):
        i = self.index
        return self.edges_cut / (i * (self.n - i))

    def prefix_alphas(self):
        i = np.arange(1, self.n)
        return self.prefix_cuts / (i * (self.n - i))


def sweep(G, spectrum=None, allow_disconnected=False, method="lapack"):
    """Two-way spectral clustering: best cut-ratio prefix of the Fiedler order.

    Vertices are ordered by their entry in the second Laplacian eigenvector
    (ascending, ties by vertex id); the prefix ``order[:i]`` with the smallest
    ``alpha`` over ``1 <= i <= n-1`` is returned, smallest ``i`` on ties.

    A disconnected graph raises DisconnectedGraphError unless
    ``allow_disconnected``; then the sweep runs on whatever null-space vector
    the solver returns, which is constant on components.
    """
    n = G.n
    if n < 2:
        raise DegenerateCutError("spectral clustering needs at least two vertices")
    comps = len(connected_components(G))
    if comps > 1 and not allow_disconnected:
        raise DisconnectedGraphError(f"graph has {comps} connected components", n_components=comps)
    if spectrum is None:
        spectrum = laplacian_spectrum(G, k=min(3, n), method=method)
    fiedler = spectrum.vectors[:, 1]
    order = np.argsort(fiedler, kind="stable")
    cuts = kernels.sweep_cuts(order, G.indptr, G.indices)
    i0 = kernels.best_prefix(cuts, n)
    mask = np.zeros(n, dtype=bool)
    mask[order[:i0]] = True
    return SweepCut(
        cut=Cut(mask),
        index=i0,
        order=order,
        prefix_cuts=cuts,
        fiedler=fiedler,
        spectrum=spectrum,
        connected=comps == 1,
        n_components=comps,
    )


def sweep_cut(G, **kwargs):
    """The cut returned by :func:`sweep`."""
    return sweep(G, **kwargs).cut


def robustness_value(max_degree, lambda2, lambda3):
    """``Δ λ2 / λ3²``; small values mean a well separated two-cluster graph."""
    if lambda3 <= DEFAULT_TOL:
        raise NumericalError(f"lambda3={lambda3:.3g} is zero: three or more components")
    return max_degree * max(lambda2, 0.0) / lambda3**2


def spectral_robustness(G, spectrum=None):
    if spectrum is None:
        spectrum = laplacian_spectrum(G, k=3)
    if spectrum.k < 3:
        raise NumericalError("need at least three eigenvalues")
    lam2 = spectrum[1]
    if abs(lam2) < ZERO_TOL:
        lam2 = 0.0
    return robustness_value(G.max_degree, lam2, spectrum[2])


@dataclass
class AssumptionReport:
    n: int
    p: float
    log_n: float
    p_threshold: float
    max_degree: int
    lambda2: float
    lambda3: float
    eta: float
    eta_max: float
    clause1_p: bool
    clause2a_degree: bool
    clause2b_lambda2: bool
    clause2c_eta: bool
    clause2d_lambda3: bool
    smaller_side: int
    clause3_balance: bool
    balance_method: str  # "exact" (brute force) or "heuristic" (sweep sides)

    @property
    def clauses(self):
        return {
            "1: p < log n / 10n": self.clause1_p,
            "2a: Delta >= 10 log n lambda3": self.clause2a_degree,
            "2b: lambda2 >= 1/10": self.clause2b_lambda2,
            "2c: eta small": self.clause2c_eta,
            "2d: lambda3 >= 10 log n": self.clause2d_lambda3,
            f"3: min cut sides >= n/10 ({self.balance_method})": self.clause3_balance,
        }

    @property
    def passed(self):
        return all(self.clauses.values())

    def render(self):
        rows = [
            f"n = {self.n}, p = {self.p:g}, ln n = {self.log_n:.6f}",
            f"[{'PASS' if self.clause1_p else 'FAIL'}] 1  p = {self.p:g} vs ln n/(10n) = {self.p_threshold:.6g}",
            f"[{'PASS' if self.clause2a_degree else 'FAIL'}] 2a Delta = {self.max_degree} vs 10 ln n lambda3 = {10 * self.log_n * self.lambda3:.6g}",
            f"[{'PASS' if self.clause2b_lambda2 else 'FAIL'}] 2b lambda2 = {self.lambda2:.6g} vs 0.1",
            f"[{'PASS' if self.clause2c_eta else 'FAIL'}] 2c eta = {self.eta:.6g} vs {self.eta_max:g}",
            f"[{'PASS' if self.clause2d_lambda3 else 'FAIL'}] 2d lambda3 = {self.lambda3:.6g} vs 10 ln n = {10 * self.log_n:.6g}",
            f"[{'PASS' if self.clause3_balance else 'FAIL'}] 3  smaller side = {self.smaller_side} vs n/10 = {self.n / 10:g} ({self.balance_method})",
        ]
        return "\n".join(rows)


def p_threshold(n):
    """Largest admissible flip probability ``ln n / (10 n)`` (natural log)."""
    return math.log(n) / (10 * n)


def check_assumptions(G, p, eta_max=1.0, spectrum=None):
    """Evaluate every well-clustering clause for ``(G, p)``.

    ``eta_max`` is the cut-off used for "eta is small". The balance clause is
    exact for ``n <= 16`` and uses the sweep cut's sides otherwise; it only
    covers the unperturbed graph, since the flipped graph's minimum cut is a
    random quantity.
    """
    n = G.n
    if n < 3:
        raise DegenerateCutError("assumption report needs n >= 3")
    log_n = math.log(n)
    if spectrum is None:
        spectrum = laplacian_spectrum(G, k=3)
    lam2, lam3 = spectrum[1], spectrum[2]
    if abs(lam2) < ZERO_TOL:
        lam2 = 0.0
    eta = robustness_value(G.max_degree, lam2, lam3) if lam3 > DEFAULT_TOL else math.inf
    if n <= BRUTE_FORCE_LIMIT:
        S, _ = brute_force_min_cut(G)
        method = "exact"
    else:
        S = sweep(G, spectrum=spectrum, allow_disconnected=True).cut
        method = "heuristic"
    smaller = min(S.size, n - S.size)
    thr = p_threshold(n)
    return AssumptionReport(
        n=n,
        p=float(p),
        log_n=log_n,
        p_threshold=thr,
        max_degree=G.max_degree,
        lambda2=lam2,
        lambda3=lam3,
        eta=eta,
        eta_max=eta_max,
        clause1_p=p < thr,
        clause2a_degree=G.max_degree >= 10 * log_n * lam3,
        clause2b_lambda2=lam2 >= 0.1,
        clause2c_eta=eta <= eta_max,
        clause2d_lambda3=lam3 >= 10 * log_n,
        smaller_side=smaller,
        clause3_balance=smaller >= n / 10,
        balance_method=method,
    )


@dataclass
class CheegerReport:
    n: int
    max_degree: int
    lambda2: float
    lambda3: float
    alpha: float  # alpha(G), or the sweep cut's alpha as an upper witness
    alpha_exact: bool
    sweep_alpha: float
    lower_holds: bool  # lambda2 <= n alpha
    upper_holds: bool  # n alpha <= sqrt(8 Delta lambda2)
    improved_witness: float  # lambda2 Delta^(1/2) / (n lambda3^(1/2))

    @property
    def upper_bound(self):
        return math.sqrt(8 * self.max_degree * max(self.lambda2, 0.0))

    @property
    def improved_ratio(self):
        """``alpha(sweep) / witness``: the hidden constant of the improved bound, measured."""
        if self.improved_witness == 0:
            return math.inf
        return self.sweep_alpha / self.improved_witness


def cheeger_diagnostics(G, slack=1e-9, spectrum=None):
    """Check ``lambda2 <= n alpha(G) <= sqrt(8 Delta lambda2)`` on a connected graph."""
    comps = len(connected_components(G))
    if comps != 1:
        raise DisconnectedGraphError(f"graph has {comps} connected components", n_components=comps)
    n = G.n
    if spectrum is None:
        spectrum = laplacian_spectrum(G, k=min(3, n))
    lam2 = spectrum[1]
    lam3 = spectrum[2] if spectrum.k > 2 else math.nan
    sw = sweep(G, spectrum=spectrum)
    if n <= BRUTE_FORCE_LIMIT:
        alpha = brute_force_min_cut(G)[1]
        exact = True
    else:
        alpha = sw.alpha
        exact = False
    na = n * alpha
    upper = math.sqrt(8 * G.max_degree * max(lam2, 0.0))
    witness = lam2 * math.sqrt(G.max_degree) / (n * math.sqrt(lam3)) if lam3 > 0 else math.nan
    return CheegerReport(
        n=n,
        max_degree=G.max_degree,
        lambda2=lam2,
        lambda3=lam3,
        alpha=alpha,
        alpha_exact=exact,
        sweep_alpha=sw.alpha,
        lower_holds=lam2 <= na + slack * max(1.0, na),
        upper_holds=na <= upper + slack * max(1.0, upper),
        improved_witness=witness,
    )


def sweep_alpha_check(G, result):
    """Independent recomputation: min over all sweep prefixes equals the result."""
    alphas = [cut_ratio_alpha(G, result.order[:i], exact=True) for i in range(1, G.n)]
    return min(alphas) == cut_ratio_alpha(G, result.cut, exact=True)
