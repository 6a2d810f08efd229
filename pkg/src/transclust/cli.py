"""``transclust`` command line interface.

Subcommands: stats, similarity, dendrogram, local, global, curve, simulate,
experiment. Node ids on input and output are the ids used in the edge-list
file. Reals are printed with 12 significant digits.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from .clustering import build_dendrogram, global_trans, local_trans
from .errors import DomainError, EdgeListParseError, EstimationError
from .experiments import (
    RecoveryConfig,
    cluster_size_curve,
    run_recovery,
    run_transitivity_limit,
    run_transitivity_vanishing,
)
from .graph import UndirectedGraph, load_edge_list, write_edge_list
from .metrics import graph_stats
from .models import (
    BackgroundSpec,
    DegreeCorrectedLocalSBM,
    FourParamSBM,
    LocalSBM,
    sample_dc_local_sbm,
    sample_four_param,
    sample_local_sbm,
)
from .similarity import build_similarity


class CliError(Exception):
    """Reported on stderr with exit status 1."""


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".12g")


def _read_graph(path: str) -> UndirectedGraph:
    try:
        with open(path) as fh:
            return load_edge_list(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    except EdgeListParseError as exc:
        raise CliError(f"{path}: {exc}") from None


@contextmanager
def _output(path: str | None):
    if path is None:
        yield sys.stdout
        return
    try:
        fh = open(path, "w", newline="")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}") from None
    with fh:
        yield fh


def _read_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON ({exc})") from None


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}") from None


def _node(g: UndirectedGraph, label: int) -> int:
    k = int(np.searchsorted(g.labels, label))
    if k == g.n or g.labels[k] != label:
        raise CliError(f"node {label} does not occur in the input")
    return k


def _sim(args, g):
    return build_similarity(g, args.sim, args.tau)


# -- subcommands -------------------------------------------------------------
def cmd_stats(args) -> None:
    g = _read_graph(args.input)
    d = graph_stats(g).to_dict()
    body = ", ".join(f'"{k}": {fmt(v)}' for k, v in d.items())
    with _output(args.out) as out:
        out.write("{" + body + "}\n")


def _write_edges_csv(out, g, u, v, w) -> None:
    a, b = g.labels[u], g.labels[v]
    out.write("u,v,weight\n")
    for x, y, z in zip(a.tolist(), b.tolist(), w.tolist()):
        out.write(f"{x},{y},{fmt(z)}\n")


def cmd_similarity(args) -> None:
    g = _read_graph(args.input)
    eu, ev, w = _sim(args, g).edges()
    # Labels are increasing in dense id, so edge-id order is (u, v) order.
    with _output(args.out) as out:
        _write_edges_csv(out, g, eu, ev, w)


def cmd_dendrogram(args) -> None:
    g = _read_graph(args.input)
    d = build_dendrogram(_sim(args, g))
    with _output(args.out) as out:
        _write_edges_csv(out, g, d.u, d.v, d.weight)


def cmd_local(args) -> None:
    g = _read_graph(args.input)
    members = sorted(local_trans(_sim(args, g), _node(g, args.seed), args.cut))
    with _output(args.out) as out:
        out.writelines(f"{g.labels[i]}\n" for i in members)


def cmd_global(args) -> None:
    g = _read_graph(args.input)
    clusters = global_trans(_sim(args, g), args.cut)
    with _output(args.out) as out:
        out.write("node,cluster\n")
        out.writelines(f"{x},{c}\n" for x, c in zip(g.labels.tolist(), clusters.labels.tolist()))


def _parse_cuts(text: str) -> list[float]:
    try:
        cuts = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise CliError(f"--cuts must be a comma separated list of numbers, got {text!r}") from None
    if not cuts:
        raise CliError("--cuts is empty")
    return cuts


def _write_curve(out, rows) -> None:
    cols = list(rows[0])
    out.write(",".join(cols) + "\n")
    for row in rows:
        out.write(",".join(fmt(row[c]) for c in cols) + "\n")


def cmd_curve(args) -> None:
    g = _read_graph(args.input)
    rows = cluster_size_curve(g, args.sim, _parse_cuts(args.cuts), args.tau)
    with _output(args.out) as out:
        _write_curve(out, rows)


def _background(params: dict, n: int) -> BackgroundSpec:
    if "background" in params:
        g = _read_graph(params["background"])
        return BackgroundSpec.fixed(g)
    return BackgroundSpec.erdos_renyi(float(params.get("lambda", 0.0)))


def _build_model(kind: str, params: dict):
    try:
        if kind == "four":
            return FourParamSBM(int(params["K"]), int(params["s"]), float(params["p"]), float(params["r"]))
        n, s, p_in = int(params["n"]), int(params["s"]), float(params["p_in"])
        bg = _background(params, n)
        if kind == "local":
            return LocalSBM(n, s, p_in, float(params["p_out"]), bg)
        if kind == "dclocal":
            return DegreeCorrectedLocalSBM(n, s, p_in, bg)
    except KeyError as exc:
        raise CliError(f"model {kind!r} needs parameter {exc.args[0]!r}") from None
    raise CliError(f"unknown model {kind!r}")


def cmd_simulate(args) -> None:
    try:
        params = json.loads(args.params)
    except json.JSONDecodeError as exc:
        raise CliError(f"--params is not valid JSON ({exc})") from None
    model = _build_model(args.model, params)
    sampler = {"four": sample_four_param, "local": sample_local_sbm, "dclocal": sample_dc_local_sbm}[args.model]
    res = sampler(model, args.seed)
    with _output(args.out) as out:
        write_edge_list(res.graph, out)
    g = res.graph
    side = {
        "model": args.model,
        "params": params,
        "seed": args.seed,
        "n_nodes": g.n,
        "n_edges": g.m,
        "planted": sorted(int(g.labels[i]) for i in res.planted),
        "realized_lambda": res.info.get("realized_lambda"),
    }
    _write_text(args.out + ".json", json.dumps(side, indent=2, sort_keys=True) + "\n")


def _recovery_config(conf: dict, args) -> RecoveryConfig:
    kind = conf.get("model", "local")
    model = _build_model(kind, conf)
    if not isinstance(model, (LocalSBM, DegreeCorrectedLocalSBM)):
        raise CliError("recovery experiments need model 'local' or 'dclocal'")
    return RecoveryConfig(
        model=model,
        algorithm=conf.get("algorithm", "adjacency"),
        cut=conf.get("cut", 1.0),
        tau=conf.get("tau"),
        trials=args.trials if args.trials is not None else int(conf.get("trials", 100)),
        seed=args.seed if args.seed is not None else int(conf.get("seed", 0)),
        seeds_to_test=conf.get("seeds_to_test", "all"),
    )


def cmd_experiment(args) -> None:
    conf = _read_json(args.config) if args.config else {}
    trials = args.trials if args.trials is not None else int(conf.get("trials", 20))
    seed = args.seed if args.seed is not None else int(conf.get("seed", 0))
    if args.kind == "curve":
        g = _read_graph(conf["input"]) if "input" in conf else _read_graph(args.input)
        rows = cluster_size_curve(g, conf.get("sim", "adjacency"), conf["cuts"], conf.get("tau"))
        with _output(args.out) as out:
            _write_curve(out, rows)
        return
    if args.kind == "recovery":
        report = run_recovery(_recovery_config(conf, args))
    elif args.kind == "translimit":
        report = run_transitivity_limit(
            float(conf.get("p", 0.6)), int(conf.get("s", 10)), float(conf.get("c0", 2.0)),
            [int(n) for n in conf.get("n_values", [1000, 10000])], trials, seed,
        )
    else:
        expo = float(conf.get("exponent", 0.5))
        report = run_transitivity_vanishing(
            [int(n) for n in conf.get("n_values", [100, 1000, 10000])], trials, seed,
            schedule=lambda n: n**expo,
        )
    with _output(args.out) as out:
        out.write(report.to_csv())
    if args.out:
        _write_text(args.out + ".json", report.to_json())
    else:
        sys.stderr.write(report.to_json())


# -- parser ----------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="transclust", description="Triangle-support graph clustering.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, inp=True, sim=False):
        if inp:
            sp.add_argument("--in", dest="input", required=True, help="edge-list file")
        sp.add_argument("--out", help="output path (default stdout)")
        if sim:
            sp.add_argument("--sim", choices=["adjacency", "laplacian"], default="adjacency")
            sp.add_argument("--tau", type=float, help="Laplacian regularizer (default: mean degree)")

    common(sub.add_parser("stats", help="graph statistics as JSON"))
    common(sub.add_parser("similarity", help="edge similarity as CSV"), sim=True)
    common(sub.add_parser("dendrogram", help="maximum spanning forest as CSV"), sim=True)
    sp = sub.add_parser("local", help="seed expansion cluster")
    common(sp, sim=True)
    sp.add_argument("--seed", type=int, required=True, help="seed node id")
    sp.add_argument("--cut", type=float, required=True)
    sp = sub.add_parser("global", help="all clusters at one cut")
    common(sp, sim=True)
    sp.add_argument("--cut", type=float, required=True)
    sp = sub.add_parser("curve", help="largest cluster sizes per cut")
    common(sp, sim=True)
    sp.add_argument("--cuts", required=True, help="comma separated cut values")
    sp = sub.add_parser("simulate", help="sample a blockmodel graph")
    sp.add_argument("--model", choices=["four", "local", "dclocal"], required=True)
    sp.add_argument("--params", required=True, help="model parameters as JSON")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True)
    sp = sub.add_parser("experiment", help="Monte Carlo experiment")
    sp.add_argument("--kind", choices=["recovery", "translimit", "transvanish", "curve"], required=True)
    sp.add_argument("--config", help="JSON configuration file")
    sp.add_argument("--in", dest="input", help="edge-list file (curve kind)")
    sp.add_argument("--out")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--trials", type=int)
    return p


COMMANDS = {
    "stats": cmd_stats,
    "similarity": cmd_similarity,
    "dendrogram": cmd_dendrogram,
    "local": cmd_local,
    "global": cmd_global,
    "curve": cmd_curve,
    "simulate": cmd_simulate,
    "experiment": cmd_experiment,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("seed", "trials"):
        val = getattr(args, name, None)
        if val is not None and val < 0:
            build_parser().error(f"--{name} must be non-negative")
    if getattr(args, "cut", None) is not None and not args.cut >= 0:
        build_parser().error("--cut must be non-negative")
    if getattr(args, "tau", None) is not None and (not args.tau >= 0 or math.isinf(args.tau)):
        build_parser().error("--tau must be a non-negative number")
    try:
        COMMANDS[args.command](args)
    except (CliError, DomainError, EstimationError, KeyError) as exc:
        msg = f"missing configuration key {exc.args[0]!r}" if isinstance(exc, KeyError) else exc
        print(f"transclust: error: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
