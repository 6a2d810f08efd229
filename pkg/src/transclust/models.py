"""Seeded samplers for planted-partition and local blockmodels.

Three models are supported:

* :class:`FourParamSBM` -- ``K`` blocks of ``s`` nodes, in-block edge
  probability ``p`` and between-block probability ``r``.
* :class:`LocalSBM` -- one planted block ``S*`` of size ``s`` with internal
  probability ``p_in`` and cross probability ``p_out``, attached to an
  independent background graph on ``n`` nodes.
* :class:`DegreeCorrectedLocalSBM` -- as above but node ``j`` of the
  background is hit from ``S*`` with probability ``min(d*_j / n, 1)``,
  where ``d*_j`` is its background degree.

For the local models the background occupies ids ``0..n-1`` and ``S*`` the
last ``s`` ids ``n..n+s-1``. Bounds in the model definitions are realized
with equality.

Randomness comes from Philox streams keyed by ``(seed, pair class)`` so the
edge groups are independent by construction and a sample depends only on
its seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, EstimationError
from .graph import UndirectedGraph
from .metrics import count_triangles, two_star_count

__all__ = [
    "FourParamSBM",
    "LocalSBM",
    "DegreeCorrectedLocalSBM",
    "BackgroundSpec",
    "SampleResult",
    "sample_four_param",
    "sample_local_sbm",
    "sample_dc_local_sbm",
    "sample_erdos_renyi",
    "expected_degree",
    "remark_constant",
    "transitivity_limit",
    "p_delta_exact",
    "estimate_p_delta",
    "PDeltaEstimate",
    "derive_seeds",
]

_STREAMS = {"background": 1, "within": 2, "cross": 3, "blocks": 4, "between": 5, "er": 6}

# Pair spaces up to this size are sampled by one uniform draw per pair.
_DENSE_PAIRS = 1 << 21


def _stream(seed: int, tag: str) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(_STREAMS[tag],))
    return np.random.Generator(np.random.Philox(ss))


def derive_seeds(master: int, count: int) -> list[int]:
    """Independent 63-bit seeds for ``count`` trials of one experiment."""
    children = np.random.SeedSequence(int(master)).spawn(count)
    return [int(c.generate_state(1, np.uint64)[0] >> np.uint64(1)) for c in children]


def _decode_pairs(n: int, k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Row-major index over the strict upper triangle of an n x n matrix.
    rows = np.arange(n, dtype=np.int64)
    offsets = rows * n - rows * (rows + 1) // 2
    i = np.searchsorted(offsets, k, side="right") - 1
    j = k - offsets[i] + i + 1
    return i, j


def _distinct_uniform(total: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random ``m``-subset of ``range(total)``, sorted."""
    chosen = np.empty(0, dtype=np.int64)
    while len(chosen) < m:
        need = m - len(chosen)
        draw = rng.integers(0, total, size=need + need // 8 + 16, dtype=np.int64)
        chosen = np.union1d(chosen, draw)
    if len(chosen) > m:
        chosen = np.sort(rng.choice(chosen, size=m, replace=False))
    return chosen


def _bernoulli_pairs(n: int, p: float, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Independent Bernoulli(p) over all unordered pairs of ``n`` nodes."""
    total = n * (n - 1) // 2
    if total == 0 or p <= 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    if p >= 1:
        k = np.arange(total, dtype=np.int64)
    elif total <= _DENSE_PAIRS:
        k = np.flatnonzero(rng.random(total) < p)
    else:
        # Given the edge count, the edge set is a uniform subset.
        k = _distinct_uniform(total, int(rng.binomial(total, p)), rng)
    return _decode_pairs(n, k)


def _bernoulli_grid(rows: int, cols: int, prob, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Independent Bernoulli over a ``rows x cols`` grid; ``prob`` broadcasts."""
    hit = rng.random((rows, cols)) < np.broadcast_to(prob, (rows, cols))
    return np.nonzero(hit)


def _check_prob(name, x, open_low=False):
    if not (0 < x <= 1 if open_low else 0 <= x <= 1):
        raise DomainError(f"{name} must lie in {'(0, 1]' if open_low else '[0, 1]'}, got {x}")


@dataclass(frozen=True)
class FourParamSBM:
    K: int
    s: int
    p: float
    r: float

    def __post_init__(self):
        if self.K < 1 or self.s < 1:
            raise DomainError("K and s must be at least 1")
        _check_prob("p", self.p)
        _check_prob("r", self.r)
        if self.r > self.p:
            raise DomainError(f"need r <= p, got r={self.r} > p={self.p}")

    @property
    def n(self) -> int:
        return self.K * self.s


@dataclass(frozen=True)
class BackgroundSpec:
    """Graph on the ``n`` nodes outside the planted block.

    Either an Erdos-Renyi graph with mean degree ``mean_degree`` (pair
    probability ``mean_degree / (n - 1)``) or a fixed ``graph``.
    """

    mean_degree: float | None = None
    graph: UndirectedGraph | None = None

    def __post_init__(self):
        if (self.mean_degree is None) == (self.graph is None):
            raise DomainError("give exactly one of mean_degree or graph")
        if self.mean_degree is not None and not self.mean_degree >= 0:
            raise DomainError(f"mean degree must be non-negative, got {self.mean_degree}")

    @classmethod
    def erdos_renyi(cls, mean_degree: float) -> "BackgroundSpec":
        return cls(mean_degree=float(mean_degree))

    @classmethod
    def fixed(cls, graph: UndirectedGraph) -> "BackgroundSpec":
        return cls(graph=graph)

    def sample(self, n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        if self.graph is not None:
            if self.graph.n != n:
                raise DomainError(f"fixed background has {self.graph.n} nodes, model needs {n}")
            return self.graph.edge_arrays()
        if n < 2:
            return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
        return _bernoulli_pairs(n, min(self.mean_degree / (n - 1), 1.0), rng)

    def describe(self) -> dict:
        if self.graph is not None:
            return {"kind": "fixed", "n": self.graph.n, "m": self.graph.m}
        return {"kind": "erdos_renyi", "mean_degree": self.mean_degree}


@dataclass(frozen=True)
class LocalSBM:
    n: int
    s: int
    p_in: float
    p_out: float
    background: BackgroundSpec

    def __post_init__(self):
        if self.s < 1 or self.n < 0:
            raise DomainError("need s >= 1 and n >= 0")
        _check_prob("p_in", self.p_in, open_low=True)
        _check_prob("p_out", self.p_out)


@dataclass(frozen=True)
class DegreeCorrectedLocalSBM:
    n: int
    s: int
    p_in: float
    background: BackgroundSpec

    def __post_init__(self):
        if self.s < 1 or self.n < 0:
            raise DomainError("need s >= 1 and n >= 0")
        _check_prob("p_in", self.p_in, open_low=True)


@dataclass(frozen=True, eq=False)
class SampleResult:
    graph: UndirectedGraph
    planted: frozenset
    seed: int
    info: dict = field(default_factory=dict)


def _within_block(s: int, p: float, rng) -> tuple[np.ndarray, np.ndarray]:
    iu, ju = np.triu_indices(s, 1)
    keep = rng.random(len(iu)) < p
    return iu[keep], ju[keep]


def sample_four_param(m: FourParamSBM, seed: int) -> SampleResult:
    """Planted partition graph; blocks are ``[b*s, (b+1)*s)``, planted = block 0."""
    n, s = m.n, m.s
    iu, ju = np.triu_indices(s, 1)
    hit = _stream(seed, "blocks").random((m.K, len(iu))) < m.p
    b, k = np.nonzero(hit)
    u_in, v_in = b * s + iu[k], b * s + ju[k]
    u_x, v_x = _bernoulli_pairs(n, m.r, _stream(seed, "between"))
    cross = (u_x // s) != (v_x // s)
    g = UndirectedGraph.from_edges(n, np.concatenate([u_in, u_x[cross]]), np.concatenate([v_in, v_x[cross]]))
    return SampleResult(g, frozenset(range(s)), seed, {"model": "four"})


def sample_erdos_renyi(n: int, p: float, seed: int) -> UndirectedGraph:
    _check_prob("p", p)
    u, v = _bernoulli_pairs(n, p, _stream(seed, "er"))
    return UndirectedGraph.from_edges(n, u, v)


def _assemble(n: int, s: int, bg, within, cross) -> UndirectedGraph:
    u = np.concatenate([bg[0], n + within[0], n + cross[0]])
    v = np.concatenate([bg[1], n + within[1], cross[1]])
    return UndirectedGraph.from_edges(n + s, u, v)


def sample_local_sbm(m: LocalSBM, seed: int) -> SampleResult:
    n, s = m.n, m.s
    bg = m.background.sample(n, _stream(seed, "background"))
    within = _within_block(s, m.p_in, _stream(seed, "within"))
    cross = _bernoulli_grid(s, n, m.p_out, _stream(seed, "cross"))
    g = _assemble(n, s, bg, within, cross)
    info = {
        "model": "local",
        "realized_lambda": 2 * len(bg[0]) / n if n else 0.0,
        "cross_edges": int(len(cross[0])),
    }
    return SampleResult(g, frozenset(range(n, n + s)), seed, info)


def sample_dc_local_sbm(m: DegreeCorrectedLocalSBM, seed: int) -> SampleResult:
    n, s = m.n, m.s
    bg = m.background.sample(n, _stream(seed, "background"))
    dstar = np.bincount(np.concatenate(bg), minlength=n)
    within = _within_block(s, m.p_in, _stream(seed, "within"))
    prob = np.minimum(dstar / n, 1.0) if n else np.empty(0)
    cross = _bernoulli_grid(s, n, prob[None, :], _stream(seed, "cross"))
    g = _assemble(n, s, bg, within, cross)
    info = {
        "model": "dclocal",
        "realized_lambda": 2 * len(bg[0]) / n if n else 0.0,
        "cross_edges": int(len(cross[0])),
        "background_degrees": dstar,
    }
    return SampleResult(g, frozenset(range(n, n + s)), seed, info)


def expected_degree(m: FourParamSBM) -> float:
    """``s p + (n - s) r`` (the self-pair is counted, as in the usual formula)."""
    return m.s * m.p + (m.n - m.s) * m.r


def remark_constant(p: float, s: int, c0: float) -> float:
    """Approximate limiting transitivity ``p^3 s^2 / (p^2 s^2 + c0^2 + 2 s p c0)``."""
    if not p > 0 or s < 3 or not c0 >= 0:
        raise DomainError("need p > 0, s >= 3 and c0 >= 0")
    denom = p * p * s * s + c0 * c0 + 2 * s * p * c0
    if denom == 0:
        raise DomainError("limit constant denominator is zero")
    return p**3 * s * s / denom


def transitivity_limit(p: float, s: int, c0: float) -> float:
    """Exact limit of trans(A) for ``r = c0/n``.

    Three expected triangles per block over the expected 2-stars centred in
    it: ``(s-1)(s-2) p^3 / ((s-1)(s-2) p^2 + 2 (s-1) p c0 + c0^2)``.
    """
    if not p > 0 or s < 3 or not c0 >= 0:
        raise DomainError("need p > 0, s >= 3 and c0 >= 0")
    a = (s - 1) * (s - 2)
    return a * p**3 / (a * p * p + 2 * (s - 1) * p * c0 + c0 * c0)


def p_delta_exact(m: FourParamSBM) -> float:
    """``P(A_uv = 1 | A_iu = A_iv = 1)`` for a uniformly random triple.

    Conditions on where ``u`` and ``v`` fall relative to the block of ``i``.
    """
    n, s, p, r = m.n, m.s, m.p, m.r
    cases = [
        ((s - 1) * (s - 2), p * p * p, p * p),
        (2 * (s - 1) * (n - s), p * r * r, p * r),
        ((n - s) * (s - 1), r * r * p, r * r),
        ((n - s) * (n - 2 * s), r * r * r, r * r),
    ]
    wedges = sum(c * w for c, _, w in cases)
    if wedges == 0:
        raise EstimationError("no 2-stars have positive probability")
    return sum(c * t for c, t, _ in cases) / wedges


@dataclass(frozen=True)
class PDeltaEstimate:
    estimate: float
    stderr: float
    trials: int
    closed: int
    wedges: int


def estimate_p_delta(m: FourParamSBM, trials: int, seed: int) -> PDeltaEstimate:
    """Fraction of sampled 2-stars ``u - i - v`` that are closed.

    Pools closed and total 2-stars over trials; the standard error is the
    delta-method error of that ratio across trials.
    """
    if trials < 1:
        raise DomainError("trials must be at least 1")
    closed = np.empty(trials)
    wedges = np.empty(trials)
    for t, sd in enumerate(derive_seeds(seed, trials)):
        g = sample_four_param(m, sd).graph
        closed[t] = 3 * count_triangles(g)
        wedges[t] = two_star_count(g) // 2
    if wedges.sum() == 0:
        raise EstimationError("no 2-stars in any sampled graph")
    est = closed.sum() / wedges.sum()
    if trials > 1:
        resid = closed - est * wedges
        se = math.sqrt(np.var(resid, ddof=1) / trials) / wedges.mean()
    else:
        se = math.nan
    return PDeltaEstimate(float(est), float(se), trials, int(closed.sum()), int(wedges.sum()))
