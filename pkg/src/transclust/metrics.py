"""Transitivity statistics: triangles, 2-stars, trans(A) and clustering."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError
from .graph import UndirectedGraph, enumerate_triangles, triangle_total

__all__ = [
    "GraphStats",
    "count_triangles",
    "two_star_count",
    "transitivity_ratio",
    "local_clustering",
    "avg_clustering",
    "graph_stats",
]


@dataclass(frozen=True)
class GraphStats:
    n: int
    m: int
    triangle_count: int
    two_star_count: int
    transitivity: float
    avg_clustering: float
    mean_degree: float

    def to_dict(self) -> dict:
        """Flat mapping with the field names used by the ``stats`` command."""
        d = asdict(self)
        return {
            "n": d["n"],
            "m": d["m"],
            "triangles": d["triangle_count"],
            "two_stars": d["two_star_count"],
            "transitivity": d["transitivity"],
            "avg_clustering": d["avg_clustering"],
            "mean_degree": d["mean_degree"],
        }


def count_triangles(g: UndirectedGraph) -> int:
    return triangle_total(g)


def two_star_count(g: UndirectedGraph) -> int:
    """``sum_j d_j^2 - d_j``: connected triples, each 2-star counted twice."""
    d = g.degrees
    return int(np.dot(d, d) - d.sum())


def transitivity_ratio(g: UndirectedGraph) -> float:
    """Closed triplets over connected triples; 0 when there are no triples."""
    denom = two_star_count(g)
    if denom == 0:
        return 0.0
    return 6 * count_triangles(g) / denom


def _triangles_per_node(g: UndirectedGraph) -> np.ndarray:
    tri = enumerate_triangles(g)
    return np.bincount(tri.nodes.ravel(), minlength=g.n)


def local_clustering(g: UndirectedGraph, i: int) -> float:
    """Edge density of the subgraph induced by the neighborhood of ``i``.

    Nodes of degree below 2 get 0.
    """
    nb = g.neighbors(i)
    d = len(nb)
    if d < 2:
        return 0.0
    links = sum(len(np.intersect1d(nb, g.neighbors(int(j)), assume_unique=True)) for j in nb) // 2
    return links / (d * (d - 1) / 2)


def _local_clustering_all(g: UndirectedGraph) -> np.ndarray:
    d = g.degrees.astype(np.float64)
    pairs = d * (d - 1) / 2
    t = _triangles_per_node(g)
    out = np.zeros(g.n)
    np.divide(t, pairs, out=out, where=pairs > 0)
    return out


def avg_clustering(g: UndirectedGraph) -> float:
    if g.n == 0:
        raise DomainError("average clustering undefined for an empty graph")
    return float(_local_clustering_all(g).mean())


def graph_stats(g: UndirectedGraph) -> GraphStats:
    tri = count_triangles(g)
    two = two_star_count(g)
    return GraphStats(
        n=g.n,
        m=g.m,
        triangle_count=tri,
        two_star_count=two,
        transitivity=6 * tri / two if two else 0.0,
        avg_clustering=avg_clustering(g) if g.n else 0.0,
        mean_degree=2 * g.m / g.n if g.n else 0.0,
    )
