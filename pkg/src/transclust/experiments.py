"""Monte Carlo harness for recovery and transitivity experiments.

Every experiment derives one seed per trial from a master seed, runs the
trials (optionally on a thread pool, see ``TRANSCLUST_THREADS``) and folds
the results in trial order, so reports depend only on the configuration.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .clustering import build_dendrogram, local_trans
from .errors import DomainError
from .graph import UndirectedGraph
from .metrics import transitivity_ratio
from .models import (
    BackgroundSpec,
    DegreeCorrectedLocalSBM,
    FourParamSBM,
    LocalSBM,
    derive_seeds,
    remark_constant,
    sample_dc_local_sbm,
    sample_erdos_renyi,
    sample_four_param,
    sample_local_sbm,
    transitivity_limit,
)
from .similarity import LaplacianConfig, build_similarity, laplacian_support, triangle_support

__all__ = [
    "RecoveryConfig",
    "ExperimentReport",
    "worker_count",
    "theorem2_bound",
    "theorem2_remainder",
    "theorem3_cut",
    "theorem3_min_epsilon",
    "run_recovery",
    "run_transitivity_limit",
    "run_transitivity_vanishing",
    "cluster_size_curve",
]


def worker_count() -> int:
    """Worker cap from ``TRANSCLUST_THREADS`` (unset or 0 means all CPUs)."""
    raw = os.environ.get("TRANSCLUST_THREADS", "0").strip() or "0"
    try:
        k = int(raw)
    except ValueError:
        raise DomainError(f"TRANSCLUST_THREADS must be an integer, got {raw!r}") from None
    if k < 0:
        raise DomainError("TRANSCLUST_THREADS must be non-negative")
    return k or (os.cpu_count() or 1)


def _map_trials(fn: Callable, seeds: Sequence[int]) -> list:
    workers = min(worker_count(), len(seeds))
    if workers <= 1:
        return [fn(t, sd) for t, sd in enumerate(seeds)]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(fn, range(len(seeds)), seeds))


def _mean_se(x) -> tuple[float, float]:
    x = np.asarray(x, dtype=np.float64)
    if len(x) == 0:
        return math.nan, math.nan
    se = float(np.std(x, ddof=1) / math.sqrt(len(x))) if len(x) > 1 else math.nan
    return float(x.mean()), se


@dataclass
class ExperimentReport:
    """Per-trial records plus aggregates.

    ``records`` and ``aggregates`` are fully determined by ``config``;
    ``wall_clock`` (seconds) is the only run-dependent field.
    """

    kind: str
    config: dict
    records: list[dict]
    aggregates: dict
    wall_clock: float = 0.0

    def to_csv(self) -> str:
        buf = io.StringIO()
        if self.records:
            cols = list(self.records[0])
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(cols)
            for rec in self.records:
                w.writerow([_fmt(rec[c]) for c in cols])
        return buf.getvalue()

    def summary(self, timing: bool = True) -> dict:
        out = {"kind": self.kind, "config": self.config, "aggregates": self.aggregates}
        if timing:
            out["wall_clock"] = self.wall_clock
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(_jsonable(self.summary(timing)), indent=2, sort_keys=True) + "\n"


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".12g")
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return None if math.isnan(x) else float(format(x, ".12g"))
    return x


# -- bounds --------------------------------------------------------------
def theorem2_bound(s: int, p_in: float, cut: int) -> float:
    """Computable part of the failure probability for adjacency LocalTrans.

    ``s^2 (1 - p_in^2)^(s-2) / 2`` at cut 1 and ``s^3 (1 - p_in^2)^(s-3)`` at
    cut 2. The cross-boundary terms have no stated constant and are left
    out; see :func:`theorem2_remainder`.
    """
    q = 1.0 - p_in * p_in
    if cut == 1:
        return 0.5 * s * s * q ** (s - 2)
    if cut == 2:
        if s < 3:
            raise DomainError("cut=2 bound needs s >= 3")
        return float(s**3 * q ** (s - 3))
    raise DomainError(f"bound is stated for cut 1 or 2, got {cut}")


def theorem2_remainder(n: int, s: int, p_out: float, lam: float, cut: int) -> float:
    """Parameter combination inside the O(.) term: ``p_out^(cut+1) n s (s+lam)^cut``."""
    if cut not in (1, 2):
        raise DomainError(f"bound is stated for cut 1 or 2, got {cut}")
    return p_out ** (cut + 1) * n * s * (s + lam) ** cut


def theorem3_cut(s: int, p_in: float, lam: float, tau: float) -> float:
    """``(2 (s-1) p_in + 2 lam + tau)^-3``."""
    return (2 * (s - 1) * p_in + 2 * lam + tau) ** -3.0


def theorem3_min_epsilon(n: int, s: int, p_in: float, lam: float, tau: float) -> float:
    """Smallest epsilon with ``n >= 3 B^(3/eps) tau^(-1/eps)``, ``B = 2(s-1)p_in + 2 lam + tau``.

    The remainder ``O(n^(3 eps - 1))`` only vanishes for epsilon below 1/3.
    """
    b = 2 * (s - 1) * p_in + 2 * lam + tau
    num = 3 * math.log(b) - math.log(tau)
    if n <= 3:
        return math.inf
    return max(num, 0.0) / math.log(n / 3)


# -- recovery ----------------------------------------------------------------
@dataclass(frozen=True)
class RecoveryConfig:
    """One recovery experiment.

    ``algorithm`` is ``"adjacency"`` (triangle counts) or ``"laplacian"``.
    For the Laplacian, ``tau=None`` uses each sample's mean degree and
    ``cut="theorem3"`` uses :func:`theorem3_cut` with the nominal background
    mean degree. ``seeds_to_test`` is ``"all"`` or ``"random"``; both
    success rates are recorded either way, this picks the headline one.
    """

    model: LocalSBM | DegreeCorrectedLocalSBM
    algorithm: str = "adjacency"
    cut: float | str = 1.0
    tau: float | None = None
    trials: int = 100
    seed: int = 0
    seeds_to_test: str = "all"

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError("trials must be at least 1")
        if self.algorithm not in ("adjacency", "laplacian"):
            raise DomainError(f"unknown algorithm {self.algorithm!r}")
        if self.seeds_to_test not in ("all", "random"):
            raise DomainError(f"seeds_to_test must be 'all' or 'random', got {self.seeds_to_test!r}")
        if isinstance(self.cut, str) and not (self.cut == "theorem3" and self.algorithm == "laplacian"):
            raise DomainError(f"cut {self.cut!r} only valid as 'theorem3' with the laplacian")

    def describe(self) -> dict:
        m = self.model
        model = {
            "model": "local" if isinstance(m, LocalSBM) else "dclocal",
            "n": m.n,
            "s": m.s,
            "p_in": m.p_in,
            "background": m.background.describe(),
        }
        if isinstance(m, LocalSBM):
            model["p_out"] = m.p_out
        return {
            "model": model,
            "algorithm": self.algorithm,
            "cut": self.cut,
            "tau": self.tau,
            "trials": self.trials,
            "seed": self.seed,
            "seeds_to_test": self.seeds_to_test,
        }


def _nominal_lambda(bg: BackgroundSpec) -> float:
    if bg.mean_degree is not None:
        return bg.mean_degree
    return 2 * bg.graph.m / bg.graph.n if bg.graph.n else 0.0


def run_recovery(cfg: RecoveryConfig) -> ExperimentReport:
    """Sample, cluster from planted seeds, and score exact recovery of ``S*``."""
    m = cfg.model
    sampler = sample_local_sbm if isinstance(m, LocalSBM) else sample_dc_local_sbm
    lam = _nominal_lambda(m.background)
    start = time.perf_counter()

    def trial(t: int, sd: int) -> dict:
        res = sampler(m, sd)
        g = res.graph
        planted = sorted(res.planted)
        if cfg.algorithm == "adjacency":
            sim = triangle_support(g)
            tau = math.nan
            cut = float(cfg.cut)
        else:
            tau = cfg.tau if cfg.tau is not None else 2 * g.m / g.n
            sim = laplacian_support(g, LaplacianConfig(tau))
            cut = theorem3_cut(m.s, m.p_in, lam, tau) if cfg.cut == "theorem3" else float(cfg.cut)
        target = set(planted)
        # One draw per trial picks the "random seed" node.
        pick = planted[random.Random(sd).randrange(len(planted))]
        found = {i: local_trans(sim, i, cut) for i in planted}
        all_ok = all(found[i] == target for i in planted)
        one = found[pick]
        return {
            "trial": t,
            "seed": sd,
            "tau": tau,
            "cut": cut,
            "realized_lambda": res.info["realized_lambda"],
            "cross_edges": res.info["cross_edges"],
            "success_all": all_ok,
            "success_random": one == target,
            "random_seed_node": pick,
            "random_cluster_size": len(one),
            "random_overlap": len(one & target),
        }

    records = _map_trials(trial, derive_seeds(cfg.seed, cfg.trials))
    rate_all, se_all = _mean_se([r["success_all"] for r in records])
    rate_one, se_one = _mean_se([r["success_random"] for r in records])
    agg = {
        "success_rate_all_seeds": rate_all,
        "se_all_seeds": se_all,
        "success_rate_random_seed": rate_one,
        "se_random_seed": se_one,
        "success_rate": rate_all if cfg.seeds_to_test == "all" else rate_one,
        "se": se_all if cfg.seeds_to_test == "all" else se_one,
        "nominal_lambda": lam,
        "mean_realized_lambda": float(np.mean([r["realized_lambda"] for r in records])),
    }
    if cfg.algorithm == "adjacency" and isinstance(m, LocalSBM) and float(cfg.cut) in (1.0, 2.0):
        c = int(cfg.cut)
        agg["bound_computable_part"] = theorem2_bound(m.s, m.p_in, c) if m.s >= 3 else math.nan
        agg["bound_remainder_parameter"] = theorem2_remainder(m.n, m.s, m.p_out, lam, c)
    if cfg.algorithm == "laplacian":
        taus = [r["tau"] for r in records]
        eps = theorem3_min_epsilon(m.n, m.s, m.p_in, lam, float(np.mean(taus)))
        agg["theorem3_min_epsilon"] = eps
        agg["theorem3_n_condition_ok"] = bool(eps < 1 / 3)
        agg["mean_cut"] = float(np.mean([r["cut"] for r in records]))
        if m.s >= 3:
            agg["bound_computable_part"] = theorem2_bound(m.s, m.p_in, 1)
    return ExperimentReport("recovery", cfg.describe(), records, agg, time.perf_counter() - start)


# -- transitivity --------------------------------------------------------------
def run_transitivity_limit(
    p: float, s: int, c0: float, n_values: Sequence[int], trials: int, seed: int
) -> ExperimentReport:
    """Mean trans(A) of planted-partition graphs with ``r = c0 / n``.

    Reports the gap to both the approximation from :func:`remark_constant` and the exact
    limit from :func:`transitivity_limit`.
    """
    if not p > 0 or s < 3:
        raise DomainError("need p > 0 and s >= 3")
    start = time.perf_counter()
    records, per_n = [], []
    approx = remark_constant(p, s, c0)
    exact = transitivity_limit(p, s, c0)
    for idx, n in enumerate(n_values):
        if n % s:
            raise DomainError(f"n={n} is not a multiple of s={s}")
        model = FourParamSBM(n // s, s, p, min(c0 / n, p))
        seeds = derive_seeds(seed + 1_000_003 * idx, trials)
        vals = _map_trials(lambda t, sd: transitivity_ratio(sample_four_param(model, sd).graph), seeds)
        for t, (sd, v) in enumerate(zip(seeds, vals)):
            records.append({"n": n, "trial": t, "seed": sd, "transitivity": v})
        mean, se = _mean_se(vals)
        per_n.append({
            "n": n,
            "mean": mean,
            "se": se,
            "gap_remark": abs(mean - approx),
            "gap_limit": abs(mean - exact),
        })
    agg = {"remark_constant": approx, "exact_limit": exact, "per_n": per_n}
    cfg = {"p": p, "s": s, "c0": c0, "n_values": list(n_values), "trials": trials, "seed": seed}
    return ExperimentReport("translimit", cfg, records, agg, time.perf_counter() - start)


def run_transitivity_vanishing(
    n_values: Sequence[int],
    trials: int,
    seed: int,
    schedule: Callable[[int], float] = math.sqrt,
) -> ExperimentReport:
    """Mean trans(A) of Erdos-Renyi graphs with edge probability ``schedule(n)/n``."""
    start = time.perf_counter()
    records, per_n = [], []
    for idx, n in enumerate(n_values):
        lam = float(schedule(n))
        if not 0 < lam < n:
            raise DomainError(f"mean degree schedule must give 0 < lambda_n < n, got {lam} at n={n}")
        p = lam / n
        seeds = derive_seeds(seed + 1_000_003 * idx, trials)
        vals = _map_trials(lambda t, sd: transitivity_ratio(sample_erdos_renyi(n, p, sd)), seeds)
        for t, (sd, v) in enumerate(zip(seeds, vals)):
            records.append({"n": n, "trial": t, "seed": sd, "transitivity": v})
        mean, se = _mean_se(vals)
        per_n.append({"n": n, "lambda": lam, "target": p, "mean": mean, "se": se})
    agg = {"per_n": per_n}
    cfg = {"n_values": list(n_values), "trials": trials, "seed": seed}
    return ExperimentReport("transvanish", cfg, records, agg, time.perf_counter() - start)


# -- cluster size curves ------------------------------------------------------
def cluster_size_curve(
    g: UndirectedGraph,
    kind: str,
    cut_values: Sequence[float],
    tau: float | None = None,
    top: int = 10,
) -> list[dict]:
    """Sizes of the largest clusters at each cut, the single largest dropped.

    One dendrogram is built and every cut replays it. Missing ranks are
    padded with 1 (singletons).
    """
    if len(cut_values) == 0:
        raise DomainError("cut_values must be non-empty")
    dend = build_dendrogram(build_similarity(g, kind, tau))
    rows = []
    for cut in cut_values:
        sizes = np.sort(dend.cut(cut).sizes())[::-1][1:]
        ranked = np.ones(top, dtype=np.int64)
        k = min(top, len(sizes))
        ranked[:k] = sizes[:k]
        row = {"cut": float(cut)}
        row.update({f"size_{r + 1}": int(x) for r, x in enumerate(ranked)})
        rows.append(row)
    return rows
