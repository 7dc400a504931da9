"""Command-line entry point.

Thin adapters only: argument parsing, file I/O, and calls into the
library. Exit codes: 0 success, 1 validation failure, 2 usage error.
All randomness flows from a single --seed flag (default 0, never
entropy), so runs are reproducible.
"""

from __future__ import annotations

import argparse
import json
import platform
import random
import sys

from . import builder, iso, lifts, localsim, skeleton as sk
from .errors import ClusterTreeError
from .graph import (
    girth,
    graph_to_dot,
    read_graph_json,
    write_graph_json,
)


def _write_json(path: str, doc) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def _load_ct(path: str) -> sk.CTGraph:
    gf = read_graph_json(path)
    if gf.clusters is None or not gf.meta or "k" not in gf.meta:
        raise ClusterTreeError(
            f"{path} lacks cluster assignments or k/beta metadata"
        )
    skel = sk.build_skeleton(int(gf.meta["k"]), int(gf.meta["beta"]))
    if max(gf.clusters, default=0) >= len(skel.clusters):
        raise ClusterTreeError(
            f"{path} carries cluster ids outside its skeleton "
            "(doubled graphs are not valid CT graphs)"
        )
    return sk.CTGraph(graph=gf.graph, skeleton=skel, cluster_of=gf.clusters)


def _cmd_skeleton(args) -> int:
    skel = sk.build_skeleton(args.k, args.beta)
    sk.write_skeleton_json(args.out, skel)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(sk.skeleton_to_dot(skel))
    print(f"wrote skeleton with {len(skel.clusters)} clusters to {args.out}")
    return 0


def _cmd_build(args) -> int:
    ct = builder.build_low_girth(args.k, args.beta)
    if args.double:
        doubled = builder.build_matching_double(ct)
        meta = {"k": args.k, "beta": args.beta, "stage": "double"}
        write_graph_json(args.out, doubled.graph, doubled.cluster_of, meta)
        n, m = doubled.graph.n, doubled.graph.edge_count()
    else:
        report = sk.validate_ct_graph(ct)
        if not report.ok:
            print(report, file=sys.stderr)
            return 1
        meta = {"k": args.k, "beta": args.beta, "stage": "low-girth"}
        write_graph_json(args.out, ct.graph, ct.cluster_of, meta)
        n, m = ct.graph.n, ct.graph.edge_count()
    print(f"wrote graph with {n} nodes / {m} edges to {args.out}")
    return 0


def _cmd_predict(args) -> int:
    pred = sk.predicted_sizes(args.k, args.beta)
    doc = {
        "k": pred.k,
        "beta": pred.beta,
        "n0": pred.n0,
        "n": pred.n,
        "max_degree": pred.max_degree,
        "level_sizes": list(pred.level_sizes),
        "cluster_counts": [
            sk.cluster_count(args.k, l) for l in range(args.k + 2)
        ],
        "total_bound_ok": pred.total_bound_ok,
        "excess_bound_ok": pred.excess_bound_ok,
    }
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        print(f"n_0={pred.n0} n={pred.n} max_degree={pred.max_degree}")
        print(f"per-cluster sizes by level: {list(pred.level_sizes)}")
        print(f"clusters by level: {doc['cluster_counts']}")
    return 0


def _cmd_lift(args) -> int:
    if args.op == "matching-decomposition":
        g = read_graph_json(args.graph).graph
        matchings = lifts.matching_decomposition(g)
        _write_json(args.out, [[list(e) for e in m] for m in matchings])
        print(f"wrote {len(matchings)} perfect matchings to {args.out}")
        return 0
    if args.op == "double-cover":
        g = read_graph_json(args.graph).graph
        cover, cm = lifts.canonical_double_cover(g)
        write_graph_json(args.out, cover, meta={"stage": "double-cover"})
        if args.map_out:
            _write_json(args.map_out, {"map": list(cm.map)})
        print(f"wrote double cover with {cover.n} nodes to {args.out}")
        return 0
    if args.op == "common-lift":
        g1 = read_graph_json(args.graph).graph
        g2 = read_graph_json(args.graph2).graph
        lifted, cm1, cm2 = lifts.common_lift(g1, g2)
        write_graph_json(args.out, lifted, meta={"stage": "common-lift"})
        if args.map_out:
            _write_json(args.map_out, {"map": list(cm1.map)})
        if args.map2_out:
            _write_json(args.map2_out, {"map": list(cm2.map)})
        print(f"wrote common lift with {lifted.n} nodes to {args.out}")
        return 0
    if args.op == "supergraph":
        g = read_graph_json(args.graph).graph
        sg, _embedding = lifts.regular_supergraph(g)
        write_graph_json(args.out, sg, meta={"stage": "supergraph"})
        print(
            f"wrote {sg.max_degree()}-regular supergraph with "
            f"{sg.n} nodes to {args.out}"
        )
        return 0
    if args.op == "high-girth-regular":
        g = lifts.high_girth_regular(args.delta, args.girth, args.m)
        write_graph_json(args.out, g, meta={"stage": "high-girth-regular"})
        print(f"wrote {args.delta}-regular graph, girth {girth(g)}, to {args.out}")
        return 0
    if args.op == "pipeline":
        ct, cm = lifts.build_high_girth_ct(args.k, args.beta, args.size_cap)
        meta = {"k": args.k, "beta": args.beta, "stage": "high-girth"}
        write_graph_json(args.out, ct.graph, ct.cluster_of, meta)
        if args.map_out:
            _write_json(args.map_out, {"map": list(cm.map)})
        print(f"wrote lifted CT graph with {ct.graph.n} nodes to {args.out}")
        return 0
    raise AssertionError(f"unhandled op {args.op}")


def _cmd_verify_iso(args) -> int:
    ct = _load_ct(args.graph)
    c0 = [v for v in range(ct.graph.n) if ct.cluster_of[v] == 0]
    c1 = [v for v in range(ct.graph.n) if ct.cluster_of[v] == 1]
    if args.v0 is not None and args.v1 is not None:
        pairs = [(args.v0, args.v1)]
    elif args.all_pairs_sample:
        rng = random.Random(args.seed)
        pairs = [
            (rng.choice(c0), rng.choice(c1))
            for _ in range(args.all_pairs_sample)
        ]
    else:
        print("need --v0/--v1 or --all-pairs-sample", file=sys.stderr)
        return 2
    histogram: dict[str, int] = {}
    special = 0
    success = True
    for v0, v1 in pairs:
        phi = iso.find_isomorphism(ct, args.k, v0, v1)
        ok = iso.verify_isomorphism(ct, args.k, v0, v1, phi)
        success = success and ok
        special += phi.special_case_count()
        for case, count in phi.case_histogram().items():
            key = str(case)
            histogram[key] = histogram.get(key, 0) + count
    doc = {
        "success": success,
        "pairs": len(pairs),
        "audit_case_histogram": histogram,
        "special_case_count": special,
    }
    if args.report:
        _write_json(args.report, doc)
    print(json.dumps(doc))
    return 0 if success else 1


def _cmd_simulate(args) -> int:
    gf = read_graph_json(args.graph)
    if args.alg not in localsim.ALGORITHMS:
        print(
            f"unknown algorithm {args.alg!r}; available: "
            f"{', '.join(sorted(localsim.ALGORITHMS))}",
            file=sys.stderr,
        )
        return 2
    report = localsim.measure_expectation(
        gf.graph,
        args.k,
        args.alg,
        args.kind,
        trials=args.trials,
        seed=args.seed,
        jobs=args.jobs,
    )
    doc = report.to_json_dict()
    doc["environment"] = {
        "python": platform.python_version(),
        "platform": platform.platform(),
        "graph": args.graph,
        "k": args.k,
        "alg": args.alg,
        "seed": args.seed,
        "jobs": args.jobs,
    }
    if args.report:
        _write_json(args.report, doc)
    summary = {k: doc[k] for k in ("kind", "trials", "mean", "std", "all_valid", "ratio")}
    print(json.dumps(summary))
    return 0 if report.all_valid else 1


def _cmd_export_dot(args) -> int:
    if args.skeleton:
        skel = sk.read_skeleton_json(args.skeleton)
        text = sk.skeleton_to_dot(skel)
    else:
        gf = read_graph_json(args.graph)
        levels = None
        if gf.meta and "k" in gf.meta:
            skel = sk.build_skeleton(int(gf.meta["k"]), int(gf.meta["beta"]))
            levels = {c.id: c.level for c in skel.clusters}
            if gf.clusters and max(gf.clusters) >= len(skel.clusters):
                # doubled graph: mirror clusters reuse the base levels
                m = len(skel.clusters)
                levels.update({c.id + m: c.level for c in skel.clusters})
        text = graph_to_dot(gf.graph, gf.clusters, levels)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"wrote DOT to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clustertree",
        description=(
            "Build cluster-tree lower-bound graphs, lift them to high "
            "girth, verify view isomorphisms, and simulate LOCAL algorithms."
        ),
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("skeleton", help="build a skeleton and write it as JSON")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--beta", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dot", help="also write a DOT rendering")
    p.set_defaults(fn=_cmd_skeleton)

    p = subs.add_parser("build", help="instantiate a low-girth CT graph")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--beta", type=int, required=True)
    p.add_argument("--double", action="store_true",
                   help="emit the doubled graph with its perfect matching")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_build)

    p = subs.add_parser("predict", help="closed-form sizes and degree")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--beta", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_predict)

    p = subs.add_parser("lift", help="girth-raising operations")
    p.add_argument(
        "--op",
        required=True,
        choices=[
            "matching-decomposition",
            "double-cover",
            "common-lift",
            "supergraph",
            "high-girth-regular",
            "pipeline",
        ],
    )
    p.add_argument("--graph")
    p.add_argument("--graph2")
    p.add_argument("--k", type=int)
    p.add_argument("--beta", type=int)
    p.add_argument("--delta", type=int)
    p.add_argument("--girth", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--size-cap", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--map-out")
    p.add_argument("--map2-out")
    p.set_defaults(fn=_cmd_lift)

    p = subs.add_parser("verify-iso", help="run and check the view isomorphism")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--v0", type=int)
    p.add_argument("--v1", type=int)
    p.add_argument("--all-pairs-sample", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report")
    p.set_defaults(fn=_cmd_verify_iso)

    p = subs.add_parser("simulate", help="measure a LOCAL algorithm over trials")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alg", required=True)
    p.add_argument("--kind", required=True, choices=list(localsim.KINDS))
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--report")
    p.set_defaults(fn=_cmd_simulate)

    p = subs.add_parser("export-dot", help="write a DOT rendering")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--graph")
    group.add_argument("--skeleton")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_export_dot)

    return parser


def dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.fn(args)
    except ClusterTreeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, FileNotFoundError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
