"""Triangle-support edge similarities.

Two weightings of the edges of ``A`` are provided:

* ``triangle_support``: ``T = (AA) . A``, the number of triangles on each edge.
* ``laplacian_support``: ``(L L) . L`` for the regularized normalized
  Laplacian ``L = D_tau^{-1/2} A D_tau^{-1/2}``, where each triangle
  ``{i, j, k}`` adds ``1 / ((d_i+tau)(d_j+tau)(d_k+tau))`` to its edges.

Both are stored once per undirected edge, aligned with the graph's edge ids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import DomainError
from .graph import UndirectedGraph, enumerate_triangles

__all__ = [
    "TRIANGLE_COUNT",
    "LAPLACIAN",
    "LaplacianConfig",
    "WeightedSimilarity",
    "triangle_support",
    "laplacian_support",
    "random_walk_equivalence_check",
    "build_similarity",
]

TRIANGLE_COUNT = "triangle-count"
LAPLACIAN = "laplacian"


@dataclass(frozen=True)
class LaplacianConfig:
    tau: float

    def __post_init__(self):
        if not self.tau >= 0:
            raise DomainError(f"tau must be non-negative, got {self.tau}")

    @classmethod
    def mean_degree(cls, g: UndirectedGraph) -> "LaplacianConfig":
        """Regularizer equal to the empirical mean degree."""
        return cls(2 * g.m / g.n if g.n else 0.0)


@dataclass(frozen=True, eq=False)
class WeightedSimilarity:
    """Non-negative weight per undirected edge of ``graph``.

    ``weights[e]`` belongs to the edge with id ``e``; see
    :meth:`UndirectedGraph.edge_arrays`.
    """

    graph: UndirectedGraph
    weights: np.ndarray
    kind: str
    tau: float | None = None

    def weight(self, i: int, j: int):
        """Weight of ``{i, j}``; 0 for non-edges (off the support of ``A``)."""
        if i == j or not self.graph.has_edge(i, j):
            self.graph._check_node(i)
            self.graph._check_node(j)
            return self.weights.dtype.type(0)
        return self.weights[self.graph.edge_id(i, j)]

    def edges(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        eu, ev = self.graph.edge_arrays()
        return eu, ev, self.weights

    def to_scipy(self) -> sp.csr_matrix:
        """Symmetric sparse matrix; explicit zeros are kept on the support."""
        g = self.graph
        data = self.weights[g.slot_edge].astype(np.float64)
        return sp.csr_matrix((data, g.indices, g.indptr), shape=(g.n, g.n))

    def __repr__(self) -> str:
        tau = "" if self.tau is None else f", tau={self.tau:g}"
        return f"WeightedSimilarity(kind={self.kind!r}{tau}, m={len(self.weights)})"


def triangle_support(g: UndirectedGraph) -> WeightedSimilarity:
    tri = enumerate_triangles(g)
    w = np.bincount(tri.edges.ravel(), minlength=g.m).astype(np.int64)
    w.setflags(write=False)
    return WeightedSimilarity(g, w, TRIANGLE_COUNT)


def laplacian_support(g: UndirectedGraph, cfg: LaplacianConfig | float) -> WeightedSimilarity:
    if not isinstance(cfg, LaplacianConfig):
        cfg = LaplacianConfig(float(cfg))
    tau = cfg.tau
    tri = enumerate_triangles(g)
    shifted = g.degrees.astype(np.float64) + tau
    a, b, c = tri.nodes.T
    term = 1.0 / (shifted[a] * shifted[b] * shifted[c])
    # Column t of edges is opposite column 2 - t of nodes.
    edge = tri.edges.ravel()
    third = tri.nodes[:, ::-1].ravel()
    vals = np.repeat(term, 3)
    # Sum per edge in ascending order of the third corner.
    order = np.lexsort((third, edge))
    w = np.bincount(edge[order], weights=vals[order], minlength=g.m)
    w.setflags(write=False)
    return WeightedSimilarity(g, w, LAPLACIAN, tau)


def _inv(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x, dtype=np.float64)
    np.divide(1.0, x, out=out, where=x > 0)
    return out


def random_walk_equivalence_check(g: UndirectedGraph, cfg: LaplacianConfig | float, atol: float = 1e-12) -> bool:
    """Compare ``(L L) . L`` with ``(P P) . P^T`` for ``P = D_tau^{-1} A``.

    Both sides are formed with sparse matrix products on the edge support.
    """
    if not isinstance(cfg, LaplacianConfig):
        cfg = LaplacianConfig(float(cfg))
    if g.m == 0:
        return True
    a = g.to_scipy()
    shifted = g.degrees.astype(np.float64) + cfg.tau
    half = sp.diags(np.sqrt(_inv(shifted)))
    lap = (half @ a @ half).tocsr()
    rw = (sp.diags(_inv(shifted)) @ a).tocsr()
    left = (lap @ lap).multiply(lap).tocsr()
    right = (rw @ rw).multiply(rw.T.tocsr()).tocsr()
    eu, ev = g.edge_arrays()
    lv = np.asarray(left[eu, ev]).ravel()
    rv = np.asarray(right[eu, ev]).ravel()
    return bool(np.max(np.abs(lv - rv)) <= atol)


def build_similarity(g: UndirectedGraph, kind: str = "adjacency", tau: float | None = None) -> WeightedSimilarity:
    """Dispatch on a kind name: ``adjacency`` or ``laplacian``.

    For ``laplacian`` the regularizer defaults to the mean degree.
    """
    if kind in ("adjacency", TRIANGLE_COUNT):
        return triangle_support(g)
    if kind == LAPLACIAN:
        cfg = LaplacianConfig.mean_degree(g) if tau is None else LaplacianConfig(tau)
        return laplacian_support(g, cfg)
    raise DomainError(f"unknown similarity kind {kind!r}")
