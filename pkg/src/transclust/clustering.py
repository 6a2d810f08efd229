"""Seed expansion (LocalTrans) and single-linkage dendrograms (GlobalTrans).

Everything here thresholds a :class:`WeightedSimilarity` with the rule
"keep an edge iff its weight >= cut". Under that rule the local cluster of
a seed is its connected component in the thresholded graph, and the global
clustering is the set of all such components.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import DomainError
from .similarity import WeightedSimilarity

__all__ = [
    "Dendrogram",
    "ClusterSet",
    "local_trans",
    "build_dendrogram",
    "cut_dendrogram",
    "global_trans",
]


def _check_cut(cut) -> float:
    cut = float(cut)
    if not cut >= 0:
        raise DomainError(f"cut must be non-negative, got {cut}")
    return cut


def local_trans(sim: WeightedSimilarity, seed: int, cut: float, order: str = "bfs") -> set[int]:
    """Grow a cluster from ``seed`` across edges with weight >= ``cut``.

    Parameters
    ----------
    sim : WeightedSimilarity
        Edge weights, e.g. triangle counts.
    seed : int
        Starting node.
    cut : float
        Threshold; an edge on the boundary admits its outer endpoint when
        its weight is at least ``cut``.
    order : {"bfs", "dfs"}
        Frontier discipline. The result does not depend on it.

    Returns
    -------
    set of int
        The fixed point of the expansion, always containing ``seed``.
    """
    g = sim.graph
    g._check_node(seed)
    cut = _check_cut(cut)
    if order not in ("bfs", "dfs"):
        raise DomainError(f"unknown frontier order {order!r}")
    indptr, indices, slot_edge, w = g.indptr, g.indices, g.slot_edge, sim.weights
    members = {int(seed)}
    frontier = deque([int(seed)])
    pop = frontier.popleft if order == "bfs" else frontier.pop
    while frontier:
        u = pop()
        lo, hi = indptr[u], indptr[u + 1]
        passing = indices[lo:hi][w[slot_edge[lo:hi]] >= cut]
        for x in passing.tolist():
            if x not in members:
                members.add(x)
                frontier.append(x)
    return members


@dataclass(frozen=True)
class ClusterSet:
    """Partition of ``0..n-1``.

    ``labels[i]`` is the block of node ``i``; blocks are numbered by their
    smallest member.
    """

    labels: np.ndarray
    cut: float

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def count(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    def blocks(self) -> list[list[int]]:
        order = np.argsort(self.labels, kind="stable")
        bounds = np.cumsum(np.bincount(self.labels, minlength=self.count))[:-1]
        return [b.tolist() for b in np.split(order, bounds)] if len(order) else []

    def block_of(self, i: int) -> set[int]:
        return set(np.flatnonzero(self.labels == self.labels[i]).tolist())

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.count)

    def as_sets(self) -> set[frozenset]:
        return {frozenset(b) for b in self.blocks()}


def _canonical(labels: np.ndarray) -> np.ndarray:
    # Renumber so blocks appear in order of their smallest node.
    _, first, dense = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first)] = np.arange(len(first))
    return rank[dense.ravel()]


def _components(n: int, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    if n == 0:
        return np.empty(0, dtype=np.int64)
    mat = coo_matrix((np.ones(len(u)), (u, v)), shape=(n, n))
    _, labels = connected_components(mat, directed=False)
    return _canonical(labels.astype(np.int64))


@dataclass(frozen=True)
class Dendrogram:
    """Maximum spanning forest of a similarity, merges by falling weight.

    Cutting at level ``c`` keeps the forest edges of weight >= ``c``; the
    components are those of the similarity thresholded at ``c``.
    """

    n: int
    u: np.ndarray
    v: np.ndarray
    weight: np.ndarray
    labels: np.ndarray = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.weight)

    @property
    def merges(self) -> list[tuple[tuple[int, int], float]]:
        return [((a, b), w) for a, b, w in zip(self.u.tolist(), self.v.tolist(), self.weight.tolist())]

    def cut(self, cut: float) -> "ClusterSet":
        return cut_dendrogram(self, cut)


def build_dendrogram(sim: WeightedSimilarity) -> Dendrogram:
    """Kruskal on descending weight, ties broken by ``(u, v)``."""
    eu, ev, w = sim.edges()
    n = sim.graph.n
    order = np.lexsort((ev, eu, -w.astype(np.float64)))
    parent = list(range(n))
    size = [1] * n
    picked = []

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for e, a, b in zip(order.tolist(), eu[order].tolist(), ev[order].tolist()):
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        if size[ra] < size[rb]:
            ra, rb = rb, ra
        parent[rb] = ra
        size[ra] += size[rb]
        picked.append(e)
        if len(picked) == n - 1:
            break
    picked = np.asarray(picked, dtype=np.int64)
    return Dendrogram(n, eu[picked], ev[picked], w[picked], sim.graph.labels)


def cut_dendrogram(d: Dendrogram, cut: float) -> ClusterSet:
    cut = _check_cut(cut)
    keep = d.weight >= cut
    return ClusterSet(_components(d.n, d.u[keep], d.v[keep]), cut)


def global_trans(sim: WeightedSimilarity, cut: float) -> ClusterSet:
    return cut_dendrogram(build_dendrogram(sim), cut)
