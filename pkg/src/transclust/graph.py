"""Immutable sparse undirected simple graphs.

Graphs are stored in compressed sparse row form: ``indptr`` and ``indices``
with every neighbor list strictly sorted. Undirected edges carry a dense id
in ``[0, m)`` following the lexicographic order of ``(u, v)`` with ``u < v``.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, TextIO

import numpy as np
import scipy.sparse as sp

from .errors import DomainError, EdgeListParseError

__all__ = [
    "UndirectedGraph",
    "Triangles",
    "load_edge_list",
    "write_edge_list",
    "degree",
    "common_neighbor_count",
    "induced_subgraph",
    "enumerate_triangles",
    "triangle_total",
]

# Upper bound on wedges materialised at once while enumerating triangles.
_WEDGE_CHUNK = 1 << 22


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class UndirectedGraph:
    """Simple undirected graph on nodes ``0..n-1``.

    Use :meth:`from_edges` or :func:`load_edge_list` to build one; the
    constructor trusts its arguments.

    Attributes
    ----------
    n : int
        Node count.
    m : int
        Undirected edge count.
    indptr, indices : ndarray
        CSR structure; ``indices[indptr[i]:indptr[i+1]]`` is the sorted
        neighbor list of ``i``.
    labels : ndarray
        Original id of each node (identity when built from dense ids).
    """

    __slots__ = ("n", "m", "indptr", "indices", "labels", "_edges", "_slot_edge", "_degrees")

    def __init__(self, indptr: np.ndarray, indices: np.ndarray, labels: np.ndarray | None = None):
        self.indptr = _frozen(np.asarray(indptr, dtype=np.int64))
        self.indices = _frozen(np.asarray(indices, dtype=np.int64))
        self.n = len(self.indptr) - 1
        self.m = len(self.indices) // 2
        if labels is None:
            labels = np.arange(self.n, dtype=np.int64)
        self.labels = _frozen(np.asarray(labels, dtype=np.int64))
        self._edges = None
        self._slot_edge = None
        self._degrees = None

    @classmethod
    def from_edges(cls, n: int, u: Iterable[int], v: Iterable[int], labels=None) -> "UndirectedGraph":
        """Build a graph from endpoint arrays, normalising as it goes.

        Self-loops are dropped, duplicates (in either orientation) collapse,
        and reverse edges are added.
        """
        if n < 0:
            raise DomainError(f"node count must be non-negative, got {n}")
        u = np.asarray(u, dtype=np.int64).ravel()
        v = np.asarray(v, dtype=np.int64).ravel()
        if u.shape != v.shape:
            raise DomainError("endpoint arrays differ in length")
        if u.size and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n):
            raise DomainError(f"edge endpoint outside [0, {n})")
        keep = u != v
        lo = np.minimum(u[keep], v[keep])
        hi = np.maximum(u[keep], v[keep])
        keys = np.unique(lo * n + hi) if lo.size else np.empty(0, dtype=np.int64)
        lo, hi = keys // max(n, 1), keys % max(n, 1)
        rows = np.concatenate([lo, hi])
        cols = np.concatenate([hi, lo])
        order = np.lexsort((cols, rows))
        rows, cols = rows[order], cols[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        return cls(indptr, cols, labels)

    @classmethod
    def from_adjacency(cls, neighbors: Iterable[Iterable[int]]) -> "UndirectedGraph":
        """Build from a list of neighbor lists (symmetrised)."""
        neighbors = [list(nb) for nb in neighbors]
        u = [i for i, nb in enumerate(neighbors) for _ in nb]
        v = [j for nb in neighbors for j in nb]
        return cls.from_edges(len(neighbors), u, v)

    @classmethod
    def from_dense(cls, a) -> "UndirectedGraph":
        a = np.asarray(a)
        iu, ju = np.nonzero(np.triu((a != 0) | (a.T != 0), 1))
        return cls.from_edges(a.shape[0], iu, ju)

    # -- basic queries -------------------------------------------------
    @property
    def degrees(self) -> np.ndarray:
        if self._degrees is None:
            self._degrees = _frozen(np.diff(self.indptr))
        return self._degrees

    def neighbors(self, i: int) -> np.ndarray:
        self._check_node(i)
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    @property
    def adjacency(self) -> list[list[int]]:
        return [self.indices[self.indptr[i]:self.indptr[i + 1]].tolist() for i in range(self.n)]

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Endpoints ``(u, v)`` of every edge, ``u < v``, indexed by edge id."""
        if self._edges is None:
            rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
            upper = rows < self.indices
            self._edges = (_frozen(rows[upper]), _frozen(self.indices[upper].copy()))
        return self._edges

    @property
    def slot_edge(self) -> np.ndarray:
        """Edge id for every CSR slot, aligned with :attr:`indices`."""
        if self._slot_edge is None:
            eu, ev = self.edge_arrays()
            rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
            lo = np.minimum(rows, self.indices)
            hi = np.maximum(rows, self.indices)
            self._slot_edge = _frozen(np.searchsorted(eu * self.n + ev, lo * self.n + hi))
        return self._slot_edge

    def edge_id(self, i: int, j: int) -> int:
        """Id of edge ``{i, j}``; raises ``KeyError`` when absent."""
        self._check_node(i)
        self._check_node(j)
        nb = self.neighbors(i)
        k = int(np.searchsorted(nb, j))
        if k == len(nb) or nb[k] != j:
            raise KeyError((i, j))
        return int(self.slot_edge[self.indptr[i] + k])

    def has_edge(self, i: int, j: int) -> bool:
        nb = self.neighbors(i)
        k = int(np.searchsorted(nb, j))
        return k < len(nb) and nb[k] == j

    def to_scipy(self, dtype=np.float64) -> sp.csr_matrix:
        data = np.ones(len(self.indices), dtype=dtype)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        eu, ev = self.edge_arrays()
        a[eu, ev] = 1
        a[ev, eu] = 1
        return a

    def _check_node(self, i) -> None:
        if not 0 <= i < self.n:
            raise DomainError(f"node {i} outside [0, {self.n})")

    def __eq__(self, other) -> bool:
        if not isinstance(other, UndirectedGraph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.labels, other.labels)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"UndirectedGraph(n={self.n}, m={self.m})"


# -- edge-list I/O -------------------------------------------------------
def load_edge_list(stream: TextIO | Iterable[str]) -> UndirectedGraph:
    """Parse a whitespace separated edge list (SNAP style).

    Lines starting with ``#`` and blank lines are skipped. Node ids may be
    any non-negative integers; they are remapped to ``0..n-1`` in increasing
    order of original id, and the originals are kept in ``labels``.
    """
    us, vs = [], []
    for lineno, line in enumerate(stream, start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != 2:
            raise EdgeListParseError(lineno, line.rstrip("\n"))
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(lineno, line.rstrip("\n")) from None
        if a < 0 or b < 0:
            raise EdgeListParseError(lineno, line.rstrip("\n"), "negative node id")
        us.append(a)
        vs.append(b)
    if not us:
        return UndirectedGraph(np.zeros(1, dtype=np.int64), np.empty(0, dtype=np.int64))
    u = np.array(us, dtype=np.int64)
    v = np.array(vs, dtype=np.int64)
    labels, inverse = np.unique(np.concatenate([u, v]), return_inverse=True)
    k = len(u)
    return UndirectedGraph.from_edges(len(labels), inverse[:k], inverse[k:], labels)


def write_edge_list(g: UndirectedGraph, stream: TextIO) -> None:
    """Write each edge once as ``u v`` (original ids, ``u < v``, sorted).

    Isolated nodes cannot be represented in this format and are lost.
    """
    eu, ev = g.edge_arrays()
    a, b = g.labels[eu], g.labels[ev]
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    order = np.lexsort((hi, lo))
    stream.writelines(f"{x} {y}\n" for x, y in zip(lo[order].tolist(), hi[order].tolist()))


# -- queries -------------------------------------------------------------
def degree(g: UndirectedGraph, i: int) -> int:
    g._check_node(i)
    return int(g.indptr[i + 1] - g.indptr[i])


def common_neighbor_count(g: UndirectedGraph, i: int, j: int) -> int:
    """``|N_i ∩ N_j|`` by merging the two sorted neighbor lists."""
    if i == j:
        raise DomainError("common_neighbor_count needs two distinct nodes")
    a, b = g.neighbors(i), g.neighbors(j)
    return len(np.intersect1d(a, b, assume_unique=True))


def induced_subgraph(g: UndirectedGraph, nodes: Iterable[int]) -> UndirectedGraph:
    """Subgraph on ``nodes`` (renumbered in increasing order).

    The result's ``labels`` hold the original ids of the kept nodes.
    """
    keep = np.unique(np.fromiter((int(x) for x in nodes), dtype=np.int64))
    if keep.size and (keep[0] < 0 or keep[-1] >= g.n):
        raise DomainError(f"node set not contained in [0, {g.n})")
    newid = np.full(g.n, -1, dtype=np.int64)
    newid[keep] = np.arange(len(keep))
    eu, ev = g.edge_arrays()
    inside = (newid[eu] >= 0) & (newid[ev] >= 0)
    return UndirectedGraph.from_edges(len(keep), newid[eu[inside]], newid[ev[inside]], g.labels[keep])


# -- triangle enumeration ---------------------------------------------------
class Triangles(NamedTuple):
    """Every triangle once.

    ``nodes[t]`` is ``(a, b, c)`` and ``edges[t]`` the ids of the edges
    opposite ``c``, ``b`` and ``a`` respectively, i.e. ``{a,b}``, ``{a,c}``,
    ``{b,c}``.
    """

    nodes: np.ndarray
    edges: np.ndarray

    def __len__(self):
        return len(self.nodes)


def _rank(g: UndirectedGraph) -> np.ndarray:
    # Position of each node in (degree, id) order.
    rank = np.empty(g.n, dtype=np.int64)
    rank[np.lexsort((np.arange(g.n), g.degrees))] = np.arange(g.n)
    return rank


def triangle_total(g: UndirectedGraph) -> int:
    """Number of triangles, without listing them.

    Same degree orientation as :func:`enumerate_triangles`; the wedge
    closing is done by a sparse product ``(U U) . U`` of the oriented
    adjacency ``U``.
    """
    if g.m == 0:
        return 0
    eu, ev = g.edge_arrays()
    rank = _rank(g)
    ru, rv = rank[eu], rank[ev]
    u = sp.csr_matrix(
        (np.ones(g.m, dtype=np.int64), (np.minimum(ru, rv), np.maximum(ru, rv))), shape=(g.n, g.n)
    )
    return int((u @ u).multiply(u).sum())


def enumerate_triangles(g: UndirectedGraph) -> Triangles:
    """List all triangles with the degree-ordered forward algorithm.

    Each edge is oriented from lower to higher (degree, id) rank, so every
    out-list has length at most ``sqrt(2m)``; a triangle is found exactly
    once from its lowest-ranked corner. Work is ``O(m^{3/2})``.
    """
    n = g.n
    eu, ev = g.edge_arrays()
    if g.m == 0:
        empty = np.empty((0, 3), dtype=np.int64)
        return Triangles(empty, empty.copy())
    rank = _rank(g)
    flip = rank[eu] > rank[ev]
    src = np.where(flip, ev, eu)
    dst = np.where(flip, eu, ev)
    order = np.lexsort((rank[dst], src))
    src, dst, eid = src[order], dst[order], order.astype(np.int64)
    okeys = src * n + dst
    by_key = np.argsort(okeys)
    sorted_keys = okeys[by_key]

    # For the oriented edge at position p, partners are the later entries
    # of the same out-list.
    group_end = np.searchsorted(src, src, side="right")
    partners = group_end - np.arange(len(src)) - 1
    cum = np.cumsum(partners)

    node_parts, edge_parts = [], []
    start = 0
    while start < len(src):
        stop = int(np.searchsorted(cum, cum[start] - partners[start] + _WEDGE_CHUNK, side="right"))
        stop = max(stop, start + 1)
        c = partners[start:stop]
        total = int(c.sum())
        if total:
            first = np.repeat(np.arange(start, stop), c)
            offs = np.arange(total) - np.repeat(np.cumsum(c) - c, c)
            second = first + 1 + offs
            v, w = dst[first], dst[second]
            q = v * n + w
            pos = np.searchsorted(sorted_keys, q)
            pos[pos == len(sorted_keys)] = 0
            hit = sorted_keys[pos] == q
            first, second, pos = first[hit], second[hit], pos[hit]
            a = src[first]
            b = dst[first]
            cc = dst[second]
            node_parts.append(np.stack([a, b, cc], axis=1))
            edge_parts.append(np.stack([eid[first], eid[second], eid[by_key[pos]]], axis=1))
        start = stop
    if not node_parts:
        empty = np.empty((0, 3), dtype=np.int64)
        return Triangles(empty, empty.copy())
    return Triangles(np.concatenate(node_parts), np.concatenate(edge_parts))
