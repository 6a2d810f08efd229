import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transclust import (
    DomainError,
    UndirectedGraph,
    build_dendrogram,
    cut_dendrogram,
    global_trans,
    laplacian_support,
    local_trans,
    triangle_support,
)
from transclust.similarity import WeightedSimilarity

from conftest import brute_components, complete, random_graph


def test_local_trans_examples(bridged, k4):
    sim = triangle_support(bridged)
    assert local_trans(sim, 0, 1) == {0, 1, 2, 3}
    assert local_trans(sim, 0, 0) == set(range(8))
    assert local_trans(triangle_support(k4), 2, 3) == {2}
    with pytest.raises(DomainError):
        local_trans(sim, 8, 1)
    with pytest.raises(DomainError):
        local_trans(sim, 0, -1)


def test_dendrogram_examples(k3, bridged):
    d = build_dendrogram(triangle_support(k3))
    assert len(d) == 2 and d.weight.tolist() == [1, 1]
    d = build_dendrogram(triangle_support(bridged))
    assert sorted(d.weight.tolist()) == [0] + [2] * 6
    assert d.merges[-1] == ((3, 4), 0)
    assert len(build_dendrogram(triangle_support(UndirectedGraph.from_edges(5, [], [])))) == 0


def test_cut_examples(bridged, k4):
    d = build_dendrogram(triangle_support(bridged))
    assert cut_dendrogram(d, 1).as_sets() == {frozenset(range(4)), frozenset(range(4, 8))}
    assert cut_dendrogram(d, 0).as_sets() == {frozenset(range(8))}
    assert cut_dendrogram(d, 3).as_sets() == {frozenset([i]) for i in range(8)}
    sim = triangle_support(k4)
    assert global_trans(sim, 2).as_sets() == {frozenset(range(4))}
    assert global_trans(sim, 2.5).count == 4


def test_cut_zero_gives_support_components():
    g = UndirectedGraph.from_edges(6, [0, 1, 3], [1, 2, 4])
    assert global_trans(triangle_support(g), 0).as_sets() == {frozenset({0, 1, 2}), frozenset({3, 4}), frozenset({5})}


def test_cluster_labels_are_canonical(bridged):
    cs = global_trans(triangle_support(bridged), 1)
    assert cs.labels.tolist() == [0, 0, 0, 0, 1, 1, 1, 1]
    assert cs.blocks() == [[0, 1, 2, 3], [4, 5, 6, 7]]
    assert cs.block_of(6) == {4, 5, 6, 7}


def threshold_oracle(sim, cut):
    eu, ev, w = sim.edges()
    return brute_components(sim.graph.n, [(a, b) for a, b, x in zip(eu.tolist(), ev.tolist(), w.tolist()) if x >= cut])


def random_instance(rng):
    n = int(rng.integers(1, 35))
    g = random_graph(rng, n, float(rng.uniform(0.05, 0.6)))
    if rng.random() < 0.5:
        sim = triangle_support(g)
        cuts = sorted(rng.integers(0, 5, size=2).tolist())
    else:
        sim = laplacian_support(g, float(rng.uniform(0, 3)))
        w = sim.weights
        pool = np.concatenate([w, [0.0, w.max(initial=0) + 1]])
        cuts = sorted(rng.choice(pool, size=2).tolist())
    return sim, cuts


def test_global_equals_threshold_components_and_local():
    rng = np.random.default_rng(31)
    for _ in range(100):
        sim, (lo, hi) = random_instance(rng)
        for cut in (lo, hi):
            cs = global_trans(sim, cut)
            assert cs.as_sets() == threshold_oracle(sim, cut)
            for i in range(sim.graph.n):
                assert local_trans(sim, i, cut) == cs.block_of(i)


def test_symmetry_nesting_and_order_independence():
    rng = np.random.default_rng(32)
    for _ in range(60):
        sim, (lo, hi) = random_instance(rng)
        n = sim.graph.n
        for i in range(n):
            at_lo = local_trans(sim, i, lo)
            at_hi = local_trans(sim, i, hi)
            assert at_hi <= at_lo
            assert local_trans(sim, i, lo, order="dfs") == at_lo
            for j in at_lo:
                assert i in local_trans(sim, j, lo)


def test_union_of_local_clusters_is_global():
    rng = np.random.default_rng(33)
    for _ in range(40):
        sim, (cut, _) = random_instance(rng)
        union = {frozenset(local_trans(sim, i, cut)) for i in range(sim.graph.n)}
        assert union == global_trans(sim, cut).as_sets()


def test_dendrogram_is_a_descending_forest():
    rng = np.random.default_rng(34)
    for _ in range(40):
        sim, _ = random_instance(rng)
        d = build_dendrogram(sim)
        assert len(d) <= max(sim.graph.n - 1, 0)
        assert np.all(np.diff(d.weight.astype(float)) <= 0)
        comps = brute_components(sim.graph.n, zip(d.u.tolist(), d.v.tolist()))
        assert sim.graph.n - len(comps) == len(d), "no cycles"


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_partitions_do_not_depend_on_tie_break(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, int(rng.integers(2, 25)), 0.35)
    sim = triangle_support(g)
    # Relabel nodes so lexicographic tie-breaking sees a different order.
    perm = rng.permutation(g.n)
    eu, ev = g.edge_arrays()
    h = UndirectedGraph.from_edges(g.n, perm[eu], perm[ev])
    hsim = triangle_support(h)
    for cut in range(0, 4):
        ours = global_trans(sim, cut).as_sets()
        theirs = {frozenset(int(np.flatnonzero(perm == x)[0]) for x in b) for b in global_trans(hsim, cut).as_sets()}
        assert ours == theirs


def test_custom_weights_and_exact_threshold():
    g = complete(3)
    sim = WeightedSimilarity(g, np.array([0.5, 0.25, 0.125]), "laplacian", 1.0)
    assert local_trans(sim, 0, 0.5) == {0, 1}
    assert local_trans(sim, 0, 0.25) == {0, 1, 2}
    assert global_trans(sim, 0.5000000001).count == 3
