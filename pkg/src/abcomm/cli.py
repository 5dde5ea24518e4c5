"""Command-line surface: gen | partition | simulate | verify | stream.

Every report is a JSON document {meta, config, results}: the resolved
configuration (seeds included) and the results are deterministic for a fixed
argv, while volatile fields (timestamps) stay inside meta. Exit codes:
0 success, 1 hard bound violations from verify, 2 usage or config errors.
The ABC_SEED environment variable supplies a default seed; an explicit
--seed always wins.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import verify as verify_mod
from .aggregation import Aggregator, KINDS
from .errors import AbcommError
from .forward import forward_centralized, forward_distributed, make_random_layer
from .graph import (
    attach_random_features,
    gen_er_connected,
    gen_family,
    load_graph_file,
    save_graph_doc,
)
from .partition import (
    Partition,
    brute_force_edge_cut,
    flow_vertex_connectivity,
    greedy_edge_cut,
    vertex_cut_partition,
)
from .protocol import count_report, plan_abc, plan_standard
from .stream import replay, series_to_csv, stream_from_graph

FAMILY_KINDS = ("er", "ring", "star", "grid", "barbell", "bridge_cliques")


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("ABC_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise AbcommError(f"ABC_SEED must be an integer, got {env!r}") from exc
    return 0


def _write_report(path: str, config: dict, results: dict) -> None:
    doc = {
        "meta": {"created": datetime.now(timezone.utc).isoformat()},
        "config": config,
        "results": results,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_partition(path: str) -> Partition:
    with open(path, "r", encoding="utf-8") as fh:
        return Partition.from_doc(json.load(fh))


# ---------------------------------------------------------------------------
# subcommands


def _cmd_gen(args) -> int:
    seed = _resolve_seed(args.seed)
    if args.kind == "er":
        if args.n is None or args.p is None:
            raise AbcommError("er needs --n and --p")
        g = gen_er_connected(args.n, args.p, seed)
    elif args.kind == "ring":
        g = gen_family("ring", n=_require(args.n, "--n"))
    elif args.kind == "star":
        g = gen_family("star", n=_require(args.n, "--n"))
    elif args.kind == "grid":
        g = gen_family("grid", rows=_require(args.rows, "--rows"), cols=_require(args.cols, "--cols"))
    elif args.kind == "barbell":
        g = gen_family("barbell", k=_require(args.k, "--k"))
    else:
        g = gen_family(
            "bridge_cliques", a=_require(args.k, "--k"), b=_require(args.k2, "--k2")
        )
    feats = attach_random_features(g, args.d, seed) if args.d > 0 else None
    save_graph_doc(args.out, g, feats)
    return 0


def _require(value, flag):
    if value is None:
        raise AbcommError(f"this family needs {flag}")
    return value


def _cmd_partition(args) -> int:
    seed = _resolve_seed(args.seed)
    g, _feats = load_graph_file(args.infile)
    if args.algo == "greedy_edge":
        part = greedy_edge_cut(g, args.m, args.slack, seed)
    elif args.algo == "brute_edge":
        if args.m != 2:
            raise AbcommError("brute_edge supports exactly 2 workers")
        part, _cert = brute_force_edge_cut(g, slack=args.slack)
    else:  # vertex_cut
        if args.m != 2:
            raise AbcommError("vertex_cut supports exactly 2 workers")
        kappa, cut = flow_vertex_connectivity(g)
        if cut is None:
            raise AbcommError(f"graph is complete (connectivity {kappa}); no vertex cut exists")
        part = vertex_cut_partition(g, cut, seed)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(part.to_doc(), fh)
        fh.write("\n")
    return 0


def _cmd_simulate(args) -> int:
    seed = _resolve_seed(args.seed)
    g, feats = load_graph_file(args.graph)
    part = _load_partition(args.partition)
    if part.n != g.n:
        raise AbcommError(f"partition covers {part.n} vertices, graph has {g.n}")
    if feats is None:
        feats = attach_random_features(g, args.d, seed)
    d = feats.shape[1]
    agg = Aggregator(kind=args.agg, dim=d)
    if args.protocol == "standard":
        plan = plan_standard(g, part, dedup=args.dedup)
    else:
        plan = plan_abc(g, part)
    report = count_report(plan, d, agg_kind=args.agg)
    results = {"comm": report.to_doc()}
    if args.check_forward:
        layer = make_random_layer(d, d, args.activation, args.agg, seed)
        central = forward_centralized(g, feats, layer)
        distributed = forward_distributed(
            g, part, feats, layer, protocol=args.protocol, dedup=args.dedup
        )
        results["forward_check"] = {
            "max_abs_error": float(np.max(np.abs(central - distributed))) if g.n else 0.0,
            "bit_identical": bool(central.tobytes() == distributed.tobytes()),
        }
    config = {
        "command": "simulate",
        "graph": args.graph,
        "partition": args.partition,
        "protocol": args.protocol,
        "dedup": args.dedup,
        "agg": args.agg,
        "activation": args.activation,
        "d": int(d),
        "seed": seed,
        "check_forward": args.check_forward,
    }
    _write_report(args.out, config, results)
    return 0


def _cmd_verify(args) -> int:
    seed = _resolve_seed(args.seed)
    checks = (
        verify_mod.ALL_CHECKS
        if args.suite == "all"
        else tuple(name.strip() for name in args.suite.split(",") if name.strip())
    )
    config = verify_mod.SuiteConfig(
        checks=checks,
        trials=args.trials,
        er_graphs=args.er_graphs,
        er_n_max=args.er_n_max,
        seed=seed,
    )
    doc = verify_mod.run_suite(config)
    if args.format in ("json", "both"):
        _write_report(args.out, doc["config"], doc)
    if args.format in ("csv", "both"):
        csv_path = args.csv or (args.out + ".csv")
        with open(csv_path, "w", encoding="utf-8") as fh:
            fh.write(verify_mod.rows_to_csv(doc["instance_rows"]))
    hard = doc["hard_violations"]
    for name, rep in doc["checks"].items():
        kind = "hard" if name in verify_mod.HARD_CHECKS else "soft"
        print(
            f"{name} [{kind}]: {rep['instances']} instances, {rep['violations']} violations"
        )
    print(f"hard violations: {hard}")
    return 1 if hard else 0


def _cmd_stream(args) -> int:
    seed = _resolve_seed(args.seed)
    g, _feats = load_graph_file(args.graph)
    events = stream_from_graph(g, order=args.order, seed=seed)
    series = replay(
        events,
        policy=args.policy,
        m=args.m,
        slack=args.slack,
        protocol=args.protocol,
        selfcheck=args.selfcheck,
    )
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(series_to_csv(series))
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abcomm",
        description="communication accounting for distributed GNN forward passes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph document")
    p.add_argument("--kind", choices=FAMILY_KINDS, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--k2", type=int)
    p.add_argument("--d", type=int, default=0, help="feature dim (0 = no features)")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("partition", help="partition a graph document")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--algo", choices=("greedy_edge", "brute_edge", "vertex_cut"), required=True)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--slack", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_partition)

    p = sub.add_parser("simulate", help="count exchange traffic, optionally check a forward pass")
    p.add_argument("--graph", required=True)
    p.add_argument("--partition", required=True)
    p.add_argument("--protocol", choices=("standard", "abc"), required=True)
    p.add_argument("--dedup", action="store_true", help="set semantics for standard manifests")
    p.add_argument("--agg", choices=KINDS, default="sum")
    p.add_argument("--activation", choices=("identity", "relu"), default="identity")
    p.add_argument("--d", type=int, default=8, help="feature dim when the graph carries none")
    p.add_argument("--check-forward", action="store_true")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("verify", help="run the bound-checking suite")
    p.add_argument("--suite", default="all", help="'all' or comma-separated check ids")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--er-graphs", type=int, default=200)
    p.add_argument("--er-n-max", type=int, default=10)
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=("json", "csv", "both"), default="json")
    p.add_argument("--out", required=True)
    p.add_argument("--csv", help="csv path (defaults to <out>.csv)")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("stream", help="replay a vertex stream under a placement policy")
    p.add_argument("--graph", required=True)
    p.add_argument("--policy", choices=("boundary", "ldg"), required=True)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--slack", type=float, default=0.1)
    p.add_argument("--protocol", choices=("standard", "abc"), default="abc")
    p.add_argument("--order", choices=("natural", "random"), default="natural")
    p.add_argument("--no-selfcheck", dest="selfcheck", action="store_false")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_stream)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AbcommError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
