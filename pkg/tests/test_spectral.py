import math

import numpy as np
import pytest
from hypothesis import given

from rrspectral import kernels
from rrspectral.errors import DisconnectedGraphError, NumericalError
from rrspectral.graph import (
    Cut,
    barbell_graph,
    brute_force_min_cut,
    build_graph,
    complete_graph,
    connected_components,
    cut_ratio_alpha,
    d_size,
    path_graph,
)
from rrspectral.spectral import (
    ZERO_TOL,
    check_assumptions,
    cheeger_diagnostics,
    laplacian,
    laplacian_spectrum,
    p_threshold,
    robustness_value,
    smallest_eigenpairs,
    spectral_robustness,
    sweep,
    sweep_alpha_check,
    sweep_cut,
)

from conftest import graphs


def two_triangles_bridged():
    return build_graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


def test_laplacian_examples():
    L = laplacian(complete_graph(3))
    assert np.array_equal(L, 3 * np.eye(3) - np.ones((3, 3)))
    assert np.allclose(np.linalg.eigvalsh(L), [0, 3, 3])
    assert not laplacian(build_graph(4, [])).any()
    assert np.allclose(np.linalg.eigvalsh(laplacian(path_graph(3))), [0, 1, 3])


@given(graphs(max_n=12))
def test_laplacian_rows_sum_to_zero(G):
    L = laplacian(G)
    assert np.array_equal(L, L.T)
    assert not L.sum(axis=1).any()


@pytest.mark.parametrize("method", ["lapack", "ql"])
def test_smallest_eigenpairs_examples(method):
    sp = smallest_eigenpairs(laplacian(complete_graph(3)), 2, method=method)
    assert sp[0] == pytest.approx(0, abs=1e-9) and sp[1] == pytest.approx(3, abs=1e-9)
    two = build_graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert smallest_eigenpairs(laplacian(two), 2, method=method)[1] == pytest.approx(0, abs=1e-9)


@pytest.mark.parametrize("method", ["lapack", "ql"])
def test_path_spectrum_matches_closed_form(method):
    n = 30
    want = 2 - 2 * np.cos(np.pi * np.arange(6) / n)
    got = laplacian_spectrum(path_graph(n), k=6, method=method).values
    assert np.allclose(got, want, atol=1e-10)


def test_isomorphic_relabelling_keeps_eigenvalues():
    rng = np.random.default_rng(8)
    G = build_graph(25, np.argwhere(np.triu(rng.random((25, 25)) < 0.3, 1)))
    perm = rng.permutation(25)
    H = build_graph(25, perm[G.edges])
    a = laplacian_spectrum(G, k=5).values
    b = laplacian_spectrum(H, k=5).values
    assert np.allclose(a, b, atol=1e-9)


@pytest.mark.parametrize("method", ["lapack", "ql"])
def test_eigensolver_is_bitwise_deterministic(method):
    G = barbell_graph(7)
    a = laplacian_spectrum(G, k=3, method=method)
    b = laplacian_spectrum(G, k=3, method=method)
    assert a.values.tobytes() == b.values.tobytes()
    assert a.vectors.tobytes() == b.vectors.tobytes()


@given(graphs(min_n=3, max_n=14))
def test_spectrum_invariants(G):
    L = laplacian(G)
    k = min(4, G.n)
    for method in ("lapack", "ql"):
        sp = smallest_eigenpairs(L, k, method=method)
        assert np.all(np.diff(sp.values) >= -1e-12)
        assert sp.values[0] >= -1e-9
        assert sp.residuals(L).max() <= 1e-9 * max(1, abs(sp.values[-1]))
        assert np.abs(sp.vectors.T @ sp.vectors - np.eye(k)).max() <= 1e-9
    ref = np.linalg.eigvalsh(L)[:k]
    assert np.allclose(smallest_eigenpairs(L, k, method="ql").values, ref, atol=1e-9)


@given(graphs(min_n=2, max_n=12))
def test_zero_multiplicity_counts_components(G):
    vals = np.linalg.eigvalsh(laplacian(G))
    comps = len(connected_components(G))
    assert int(np.sum(np.abs(laplacian_spectrum(G, k=G.n).values) < ZERO_TOL)) == comps
    assert np.sum(np.abs(vals) < ZERO_TOL) == comps


def test_eigensolver_errors(monkeypatch):
    L = laplacian(path_graph(5))
    with pytest.raises(ValueError):
        smallest_eigenpairs(L, 6)
    with pytest.raises(ValueError):
        smallest_eigenpairs(L + np.triu(np.ones((5, 5)), 1), 2)
    with pytest.raises(ValueError):
        smallest_eigenpairs(L, 2, method="power")
    monkeypatch.setattr(kernels, "tridiagonal_eigh", lambda a, max_iter: (np.zeros(5), np.eye(5), -1))
    with pytest.raises(NumericalError, match="did not converge"):
        smallest_eigenpairs(L, 2, method="ql")


def test_sign_convention():
    sp = laplacian_spectrum(path_graph(9), k=3)
    for j in range(3):
        v = sp.vectors[:, j]
        first = np.flatnonzero(np.abs(v) > 1e-12 * np.abs(v).max())[0]
        assert v[first] > 0


def test_sweep_on_bridged_triangles():
    G = two_triangles_bridged()
    res = sweep(G)
    assert d_size(res.cut, Cut.from_members(6, [0, 1, 2])) == 0
    assert res.alpha == pytest.approx(1 / 9, abs=1e-15)
    assert res.edges_cut == 1


def test_sweep_rejects_disconnected():
    two = build_graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    with pytest.raises(DisconnectedGraphError) as info:
        sweep_cut(two)
    assert info.value.n_components == 2
    res = sweep(two, allow_disconnected=True)
    assert not res.connected and res.alpha == 0


def test_sweep_recovers_two_dense_blocks():
    rng = np.random.default_rng(21)
    blocks = []
    for off in (0, 20):
        up = np.argwhere(np.triu(rng.random((20, 20)) < 0.6, 1)) + off
        blocks.append(up)
    bridges = [(int(rng.integers(20)), 20 + int(rng.integers(20))) for _ in range(2)]
    G = build_graph(40, np.concatenate(blocks + [np.array(bridges)]))
    assert d_size(sweep_cut(G), Cut.from_members(40, range(20))) == 0


@pytest.mark.parametrize("k", range(3, 9))
def test_sweep_on_barbells(k):
    G = barbell_graph(k)
    res = sweep(G)
    assert d_size(res.cut, Cut.from_members(2 * k, range(k))) == 0
    assert sweep_alpha_check(G, res)


def test_sweep_order_is_stable_fiedler_sort():
    G = path_graph(7)
    res = sweep(G)
    assert np.array_equal(res.order, np.argsort(res.fiedler, kind="stable"))


@given(graphs(min_n=3, max_n=12, connected=True))
def test_sweep_properties(G):
    res = sweep(G)
    assert sweep_alpha_check(G, res)
    lam2 = res.spectrum[1]
    i = np.arange(1, G.n)
    # every prefix cut obeys the lower Cheeger bound
    assert np.all(lam2 <= G.n * res.prefix_cuts / (i * (G.n - i)) + 1e-9)
    _, best = brute_force_min_cut(G)
    assert res.alpha >= best - 1e-15
    # the order is solver-independent only for a simple lambda2 and Fiedler
    # entries that are distinct beyond roundoff
    gaps = np.diff(np.sort(res.fiedler))
    if res.spectrum[2] - lam2 > 1e-6 and gaps.min() > 1e-8:
        assert res.cut == sweep(G, method="ql").cut
    S_star, _ = brute_force_min_cut(G)
    assert d_size(res.cut, S_star) <= G.n


def test_robustness_examples():
    assert robustness_value(400, 0.4, 100) == pytest.approx(0.016, abs=1e-15)
    two = build_graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert spectral_robustness(two) == 0
    three = build_graph(6, [(0, 1), (2, 3), (4, 5)])
    with pytest.raises(NumericalError):
        spectral_robustness(three)


def test_p_threshold_natural_log():
    assert p_threshold(120) == pytest.approx(0.00399, abs=5e-6)
    assert p_threshold(574) == pytest.approx(0.00111, abs=5e-6)


def test_assumption_report_clauses():
    G = barbell_graph(6)
    rep = check_assumptions(G, 0.0)
    assert rep.clause1_p and rep.balance_method == "exact"
    sp = laplacian_spectrum(G, k=3)
    assert rep.lambda2 == sp[1] and rep.lambda3 == sp[2]
    assert rep.eta == pytest.approx(G.max_degree * sp[1] / sp[2] ** 2)
    assert rep.smaller_side == 6 and rep.clause3_balance
    assert "2b" in rep.render()

    rng = np.random.default_rng(2)
    big = build_graph(120, np.argwhere(np.triu(rng.random((120, 120)) < 0.1, 1)))
    r = check_assumptions(big, 0.1)
    assert not r.clause1_p and r.balance_method == "heuristic"
    assert check_assumptions(big, 0.003).clause1_p

    two = build_graph(8, [(0, 1), (1, 2), (2, 3), (0, 3), (4, 5), (5, 6), (6, 7), (4, 7)])
    r = check_assumptions(two, 0.01)
    assert r.lambda2 == 0 and not r.clause2b_lambda2


def test_cheeger_examples():
    rep = cheeger_diagnostics(two_triangles_bridged())
    assert rep.alpha_exact and rep.alpha == pytest.approx(1 / 9)
    assert rep.lower_holds and rep.upper_holds
    assert rep.lambda2 <= 6 / 9 <= math.sqrt(8 * 3 * rep.lambda2)

    rep = cheeger_diagnostics(complete_graph(4))
    assert rep.lambda2 == pytest.approx(4, abs=1e-9) and rep.alpha == 1
    assert rep.lower_holds and rep.upper_holds
    assert rep.upper_bound == pytest.approx(math.sqrt(96))

    with pytest.raises(DisconnectedGraphError):
        cheeger_diagnostics(build_graph(4, [(0, 1), (2, 3)]))


@given(graphs(min_n=3, max_n=12, connected=True))
def test_cheeger_sandwich(G):
    rep = cheeger_diagnostics(G)
    assert rep.lower_holds and rep.upper_holds
    assert rep.sweep_alpha >= rep.alpha - 1e-15
    assert rep.improved_ratio > 0


def test_cheeger_uses_sweep_witness_above_limit():
    G = barbell_graph(10)
    rep = cheeger_diagnostics(G)
    assert not rep.alpha_exact
    assert rep.alpha == cut_ratio_alpha(G, range(10))


def test_lapack_subset_fallback_on_isolated_vertex():
    # vertex 2 is isolated; the index-range MRRR solve returns a bad basis here
    G = build_graph(6, [(0, 1), (0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (3, 4), (4, 5)])
    L = laplacian(G)
    sp = smallest_eigenpairs(L, 4)
    assert np.allclose(sp.values, [0, 0, 3, 5], atol=1e-12)
    assert sp.residuals(L).max() <= 1e-12
