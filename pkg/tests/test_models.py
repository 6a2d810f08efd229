import math

import numpy as np
import pytest

from transclust import (
    BackgroundSpec,
    DegreeCorrectedLocalSBM,
    DomainError,
    EstimationError,
    FourParamSBM,
    LocalSBM,
    UndirectedGraph,
    estimate_p_delta,
    expected_degree,
    remark_constant,
    sample_dc_local_sbm,
    sample_four_param,
    sample_local_sbm,
    transitivity_limit,
)
from transclust.models import _bernoulli_pairs, _decode_pairs, _stream, derive_seeds, p_delta_exact

from conftest import complete, graph_from_pairs
from test_graph import check_invariants


def within_binomial(hits, trials, p, k=4.0):
    se = math.sqrt(p * (1 - p) / trials)
    return abs(hits / trials - p) <= k * se + 1e-12


def test_four_param_degenerate_cases():
    assert sample_four_param(FourParamSBM(1, 4, 1.0, 0.0), 0).graph == complete(4)
    g = sample_four_param(FourParamSBM(2, 3, 1.0, 0.0), 0).graph
    assert g == graph_from_pairs(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)])


def test_four_param_validation():
    with pytest.raises(DomainError):
        FourParamSBM(0, 3, 0.5, 0.1)
    with pytest.raises(DomainError):
        FourParamSBM(2, 3, 0.1, 0.5)


def test_four_param_mean_degree():
    m = FourParamSBM(100, 10, 0.6, 0.002)
    assert expected_degree(m) == pytest.approx(7.98)
    means = [2 * sample_four_param(m, sd).graph.m / m.n for sd in range(50)]
    # Loop-free sampler: the self pair contributes nothing.
    loop_free = (m.s - 1) * m.p + (m.n - m.s) * m.r
    assert abs(np.mean(means) - loop_free) <= 0.3
    assert abs(np.mean(means) - expected_degree(m)) <= m.p + 0.3


def test_expected_degree_examples():
    assert expected_degree(FourParamSBM(1, 10, 0.5, 0.0)) == 5.0
    assert expected_degree(FourParamSBM(3, 4, 0.0, 0.0)) == 0.0


def test_remark_constant_examples():
    assert remark_constant(1.0, 3, 0.0) == 1.0
    assert remark_constant(0.6, 10, 2.0) == pytest.approx(21.6 / 64)
    assert remark_constant(0.5, 10, 0.0) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        remark_constant(0.5, 2, 0.0)


def test_transitivity_limit_reduces_to_p_without_cross_edges():
    assert transitivity_limit(0.6, 10, 0.0) == pytest.approx(0.6)
    assert transitivity_limit(1.0, 3, 0.0) == 1.0


def test_p_delta_trivial_cases():
    est = estimate_p_delta(FourParamSBM(1, 5, 1.0, 0.0), trials=3, seed=1)
    assert est.estimate == 1.0
    with pytest.raises(EstimationError):
        estimate_p_delta(FourParamSBM(2, 1, 1.0, 0.0), trials=5, seed=1)


def brute_p_delta(K, s, p, r):
    # Fix the centre i in block 0 and enumerate ordered (u, v) by block label.
    closed = wedges = 0.0
    for bu in range(K):
        for bv in range(K):
            nu = s - 1 if bu == 0 else s
            nv = (s - 1 if bv == 0 else s) - (1 if bu == bv else 0)
            count = nu * nv
            piu = p if bu == 0 else r
            piv = p if bv == 0 else r
            puv = p if bu == bv else r
            wedges += count * piu * piv
            closed += count * piu * piv * puv
    return closed / wedges


def test_p_delta_closed_form_matches_enumeration():
    for K, s, p, r in [(5, 4, 0.7, 0.05), (50, 10, 0.6, 0.002), (3, 6, 0.3, 0.3)]:
        assert p_delta_exact(FourParamSBM(K, s, p, r)) == pytest.approx(brute_p_delta(K, s, p, r), rel=1e-12)


def test_p_delta_monte_carlo():
    m = FourParamSBM(50, 10, 0.6, 0.002)
    est = estimate_p_delta(m, trials=200, seed=4)
    target = brute_p_delta(50, 10, 0.6, 0.002)
    assert abs(est.estimate - target) <= 3 * est.stderr


def test_local_sbm_examples():
    res = sample_local_sbm(LocalSBM(7, 3, 1.0, 0.0, BackgroundSpec.erdos_renyi(0)), 3)
    assert res.graph == graph_from_pairs(10, [(7, 8), (7, 9), (8, 9)])
    assert res.planted == {7, 8, 9}
    res = sample_local_sbm(LocalSBM(1, 5, 1.0, 1.0, BackgroundSpec.erdos_renyi(3)), 3)
    assert res.graph == complete(6)


def test_local_sbm_realized_lambda():
    m = LocalSBM(2000, 20, 0.8, 1 / 2000, BackgroundSpec.erdos_renyi(4))
    lams = [sample_local_sbm(m, sd).info["realized_lambda"] for sd in range(50)]
    # Each realized value is 2 * Binomial(C(n,2), 4/(n-1)) / n.
    se = math.sqrt(2 * 4 / 2000 / 50)
    assert abs(np.mean(lams) - 4) <= 4 * se


def test_fixed_background_is_copied_and_checked():
    bg = graph_from_pairs(5, [(0, 1), (1, 2), (3, 4)])
    res = sample_local_sbm(LocalSBM(5, 2, 1.0, 0.0, BackgroundSpec.fixed(bg)), 0)
    from transclust import induced_subgraph

    assert induced_subgraph(res.graph, range(5)).adjacency == bg.adjacency
    with pytest.raises(DomainError):
        sample_local_sbm(LocalSBM(6, 2, 1.0, 0.0, BackgroundSpec.fixed(bg)), 0)
    with pytest.raises(DomainError):
        BackgroundSpec()


def test_dc_without_background_degree_has_no_cross_edges():
    empty = UndirectedGraph.from_edges(30, [], [])
    for sd in range(5):
        res = sample_dc_local_sbm(DegreeCorrectedLocalSBM(30, 6, 0.9, BackgroundSpec.fixed(empty)), sd)
        assert res.info["cross_edges"] == 0
        assert all(x >= 30 for x in res.graph.edge_arrays()[0])
    res = sample_dc_local_sbm(DegreeCorrectedLocalSBM(1, 4, 1.0, BackgroundSpec.erdos_renyi(5)), 0)
    assert res.info["cross_edges"] == 0
    assert res.graph == graph_from_pairs(5, [(a, b) for a in range(1, 5) for b in range(a + 1, 5)])


def test_dc_cross_edges_per_planted_node():
    m = DegreeCorrectedLocalSBM(5000, 20, 0.8, BackgroundSpec.erdos_renyi(6))
    per_node = [sample_dc_local_sbm(m, sd).info["cross_edges"] / m.s for sd in range(50)]
    assert abs(np.mean(per_node) - 6) <= 0.5


def test_pair_class_frequencies():
    # Local SBM: within, cross and background classes.
    m = LocalSBM(200, 10, 0.7, 0.03, BackgroundSpec.erdos_renyi(5))
    within = cross = bg = 0
    trials = 40
    for sd in range(trials):
        g = sample_local_sbm(m, sd).graph
        eu, ev = g.edge_arrays()
        inside_u, inside_v = eu >= 200, ev >= 200
        within += int(np.sum(inside_u & inside_v))
        cross += int(np.sum(inside_u != inside_v))
        bg += int(np.sum(~inside_u & ~inside_v))
    assert within_binomial(within, trials * 45, 0.7)
    assert within_binomial(cross, trials * 10 * 200, 0.03)
    assert within_binomial(bg, trials * 200 * 199 // 2, 5 / 199)

    fm = FourParamSBM(20, 5, 0.6, 0.01)
    inb = btw = 0
    for sd in range(40):
        eu, ev = sample_four_param(fm, sd).graph.edge_arrays()
        same = eu // 5 == ev // 5
        inb += int(same.sum())
        btw += int((~same).sum())
    assert within_binomial(inb, 40 * 20 * 10, 0.6)
    assert within_binomial(btw, 40 * (100 * 99 // 2 - 200), 0.01)


def test_dc_cross_frequency_per_background_node():
    rng = np.random.default_rng(8)
    n = 40
    a = np.triu(rng.random((n, n)) < 0.15, 1)
    bg = UndirectedGraph.from_dense(a)
    d = bg.degrees
    m = DegreeCorrectedLocalSBM(n, 5, 0.5, BackgroundSpec.fixed(bg))
    hits = np.zeros(n)
    trials = 400
    for sd in range(trials):
        g = sample_dc_local_sbm(m, sd).graph
        eu, ev = g.edge_arrays()
        cross = (ev >= n) & (eu < n)
        hits += np.bincount(eu[cross], minlength=n)
    draws = trials * 5
    for j in range(n):
        p = min(d[j] / n, 1.0)
        assert within_binomial(hits[j], draws, p)


def test_samplers_reproducible_and_valid():
    models = [
        (sample_four_param, FourParamSBM(30, 5, 0.5, 0.01)),
        (sample_local_sbm, LocalSBM(300, 8, 0.6, 0.01, BackgroundSpec.erdos_renyi(3))),
        (sample_dc_local_sbm, DegreeCorrectedLocalSBM(300, 8, 0.6, BackgroundSpec.erdos_renyi(3))),
    ]
    for sampler, m in models:
        a, b, c = sampler(m, 11), sampler(m, 11), sampler(m, 12)
        assert a.graph == b.graph and a.planted == b.planted
        assert a.graph != c.graph
        check_invariants(a.graph)
        assert len(a.planted) == m.s


def test_pair_decoding_matches_triu():
    n = 17
    iu, ju = np.triu_indices(n, 1)
    i, j = _decode_pairs(n, np.arange(n * (n - 1) // 2))
    assert np.array_equal(i, iu) and np.array_equal(j, ju)


def test_sparse_pair_sampler_path():
    n = 4000  # pair space above the dense threshold
    p = 2e-4
    counts, deg = [], np.zeros(n)
    for sd in range(10):
        u, v = _bernoulli_pairs(n, p, _stream(sd, "er"))
        assert np.all(u < v)
        assert len(np.unique(u * n + v)) == len(u)
        counts.append(len(u))
        deg += np.bincount(u, minlength=n) + np.bincount(v, minlength=n)
    total = 10 * n * (n - 1) // 2
    assert within_binomial(sum(counts), total, p)
    # Row position must not bias the degree.
    lo, hi = deg[: n // 2].mean(), deg[n // 2:].mean()
    assert abs(lo - hi) < 4 * math.sqrt(deg.mean() / (n // 2)) * math.sqrt(2)


def test_derive_seeds_deterministic():
    assert derive_seeds(5, 4) == derive_seeds(5, 4)
    assert len(set(derive_seeds(5, 100))) == 100
    assert derive_seeds(5, 3) == derive_seeds(5, 10)[:3]
