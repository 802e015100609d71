"""Command line interface.

Subcommands
-----------
gen              write a separating family to edge-TSV (plus labels when needed)
wl run           refine one graph to stability, dump the coloring
wl compare       run two graphs in parallel, dump the verdict
gnn forward      seeded forward pass, dump features and readout
verify           named theorem suites (--suite ID | --all) or the
                 refinement/feature consistency checker (verify consistency)

Graphs load from edge TSV (src<TAB>rel<TAB>dst, '#' comments) with an
optional label TSV, or from the JSON dump format when the path ends in
.json.  Exit codes: 0 pass/success, 1 suite failure, 2 error or refusal.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import CapExceeded, RelWLError
from .families import FamilySpec
from .gnn import (
    CompParams,
    KrnParams,
    RgcnParams,
    compgcn_forward,
    features_from_coloring,
    init_features,
    krn_forward,
    random_params,
    readout,
    rgcn_forward,
    wl_gnn_consistency,
)
from .graphs import (
    LabeledGraph,
    graph_from_json,
    load_graph,
    union_graph,
    write_edge_tsv,
    write_label_tsv,
)
from .rng import XorShift64Star
from .suites import SUITE_IDS, run_all, run_suite, verdict_json
from .wl import TUPLE_ENTRY_CAP, distinguish, init_krlwl, stable_coloring

PLAIN_VARIANTS = ("1wl", "delta-klwl", "oblivious-kwl")


def _load(path, labels_path=None):
    if str(path).endswith(".json"):
        with open(path, "r", encoding="utf-8") as fh:
            return graph_from_json(json.load(fh))
    return load_graph(path, labels_path).graph


def _graph_for_variant(graph, variant):
    return union_graph(graph) if variant in PLAIN_VARIANTS else graph


def _write_json(path, payload):
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_gen(args):
    spec = FamilySpec(family=args.family, k=args.k, r=args.r)
    graphs = list(spec.generate())
    outs = [args.out_a, args.out_b]
    label_outs = [args.labels_a, args.labels_b]
    if len(graphs) == 2 and args.out_b is None:
        raise RelWLError(f"family {args.family!r} produces two graphs; pass --out-b")
    for graph, out, labels_out in zip(graphs, outs, label_outs):
        write_edge_tsv(graph, out)
        if labels_out is None and np.unique(graph.labels).size > 1:
            labels_out = f"{out}.labels.tsv"
            print(f"labels are non-uniform; writing {labels_out}", file=sys.stderr)
        if labels_out is not None:
            write_label_tsv(graph, labels_out)
    return 0


def _cmd_wl_run(args):
    graph = _graph_for_variant(_load(args.graph, args.labels), args.variant)
    coloring, iterations = stable_coloring(
        graph, args.variant, k=args.k, max_iter=args.max_iter, cap=args.tuple_cap)
    _write_json(args.out, {
        "variant": args.variant,
        "k": args.k,
        "iterations": iterations,
        "class_count": coloring.class_count,
        "colors": coloring.colors.tolist(),
    })
    return 0


def _trace_json(trace):
    return [
        {"iteration": t,
         "a": sorted([c, m] for c, m in hist_a.items()),
         "b": sorted([c, m] for c, m in hist_b.items())}
        for t, (hist_a, hist_b) in enumerate(trace)
    ]


def _cmd_wl_compare(args):
    g = _graph_for_variant(_load(args.graph_a, args.labels_a), args.variant)
    h = _graph_for_variant(_load(args.graph_b, args.labels_b), args.variant)
    result = distinguish(g, h, args.variant, k=args.k, cap=args.tuple_cap)
    _write_json(args.out, {
        "distinguished": result.distinguished_at is not None,
        "at_iteration": result.distinguished_at,
        "iterations": result.iterations,
        "histogram_trace": _trace_json(result.histogram_trace),
    })
    return 0


def _matrix(data):
    return np.asarray(data, dtype=np.float64)


def _params_from_dict(arch, spec):
    if arch == "rgcn":
        mlp = spec.get("mlp")
        return RgcnParams(
            w0=_matrix(spec["w0"]), w_rel=[_matrix(w) for w in spec["w_rel"]],
            aggregate=spec.get("aggregate", "sum"),
            mlp=(_matrix(mlp[0]), _matrix(mlp[1])) if mlp else None)
    if arch == "compgcn":
        mlp = spec.get("mlp")
        return CompParams(
            w0=_matrix(spec["w0"]), w1=_matrix(spec["w1"]),
            z=[_matrix(z) for z in spec["z"]] if spec.get("z") is not None else None,
            composition=spec.get("composition", "mult"),
            scale_alphas=_matrix(spec["scale_alphas"]) if spec.get("scale_alphas") is not None else None,
            mlp=(_matrix(mlp[0]), _matrix(mlp[1])) if mlp else None,
            directional=spec.get("directional", False),
            w1_in=_matrix(spec["w1_in"]) if spec.get("w1_in") is not None else None,
            w1_out=_matrix(spec["w1_out"]) if spec.get("w1_out") is not None else None,
            normalize=spec.get("normalize", False),
            relation_update=_matrix(spec["relation_update"])
            if spec.get("relation_update") is not None else None)
    if arch == "krn":
        return KrnParams(
            k=spec["k"], w0=_matrix(spec["w0"]),
            w_pos=[_matrix(w) for w in spec["w_pos"]],
            z=[_matrix(z) for z in spec["z"]] if spec.get("z") is not None else None,
            composition=spec.get("composition", "mult"),
            scale_alphas=_matrix(spec["scale_alphas"]) if spec.get("scale_alphas") is not None else None)
    raise RelWLError(f"unknown architecture {arch!r}")


def _cmd_gnn_forward(args):
    graph = _load(args.graph, args.labels)
    config = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    arch = config.get("arch", args.arch)
    if arch != args.arch:
        raise RelWLError(f"--arch {args.arch} conflicts with config arch {arch}")
    width = int(config.get("width", 16))
    k = int(config.get("k", 2))
    composition = config.get("composition", "mult")
    rng = XorShift64Star(args.seed)

    if arch == "krn":
        tc = init_krlwl(graph, k)
        h = features_from_coloring(tc)
    else:
        mode = config.get("features", "onehot-label")
        dim = int(config.get("dim", np.unique(graph.labels).size))
        h = init_features(graph, mode, dim)

    explicit = config.get("layers")
    outputs = []
    for layer in range(args.layers):
        if explicit is not None:
            spec = explicit[layer] if layer < len(explicit) else explicit[-1]
            params = _params_from_dict(arch, spec)
        elif arch == "rgcn":
            params = random_params("rgcn", rng, h.shape[1], width, graph.r)
            params.aggregate = config.get("aggregate", "sum")
        elif arch == "compgcn":
            params = random_params(f"compgcn-{composition}", rng, h.shape[1], width, graph.r)
        elif arch == "krn":
            params = KrnParams(
                k=k, w0=rng.matrix(h.shape[1], width),
                w_pos=[rng.matrix(h.shape[1], width) for _ in range(k)],
                z=[rng.vector(h.shape[1]) for _ in range(graph.r)],
                composition=composition)
        else:
            raise RelWLError(f"unknown architecture {arch!r}")
        if arch == "rgcn":
            h = rgcn_forward(graph, params, h, args.activation)
        elif arch == "compgcn":
            h = compgcn_forward(graph, params, h, args.activation)
        else:
            h = krn_forward(graph, params, h, args.activation)
        outputs.append(h)
    final = outputs[-1] if outputs else h
    _write_json(args.out, {
        "arch": arch,
        "layers": args.layers,
        "seed": args.seed,
        "rows": final.shape[0],
        "dim": final.shape[1],
        "features": final.tolist(),
        "readout": readout(final).tolist(),
    })
    return 0


def _cmd_verify(args):
    if args.mode == "consistency":
        if not args.graph or not args.pair:
            raise RelWLError("verify consistency needs --graph and --pair")
        graph = _load(args.graph, args.labels)
        report = wl_gnn_consistency(graph, args.pair, layers=args.layers,
                                    seeds=args.seeds, width=args.width)
        payload = {
            "variant": report.variant,
            "arch": report.arch,
            "layers": report.layers,
            "width": report.width,
            "seeds": report.seeds,
            "violations": report.violations,
            "witness_rates": {str(s): r for s, r in report.witness_rates.items()},
            "pass": report.violation_count == 0,
        }
        _write_json(args.out, payload)
        return 0 if payload["pass"] else 1
    config = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    if args.all:
        summary = run_all(config)
        _write_json(args.out, summary)
        if summary["errors"]:
            return 2
        return 0 if summary["pass"] else 1
    if args.suite:
        verdict = run_suite(args.suite, config.get(args.suite, config))
        _write_json(args.out, verdict)
        return 0 if verdict["pass"] else 1
    raise RelWLError("verify needs --suite, --all, or the consistency mode")


def build_parser():
    parser = argparse.ArgumentParser(prog="relwl", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a separating graph family")
    gen.add_argument("--family", required=True,
                     choices=["prop3", "cycle-pair", "gk-hk", "lifted"])
    gen.add_argument("-k", type=int, default=2, help="order parameter (gk-hk, lifted)")
    gen.add_argument("-r", type=int, default=1, help="relation count (cycle-pair, lifted)")
    gen.add_argument("--out-a", required=True)
    gen.add_argument("--out-b")
    gen.add_argument("--labels-a")
    gen.add_argument("--labels-b")
    gen.set_defaults(func=_cmd_gen)

    wl = sub.add_parser("wl", help="refinement runs").add_subparsers(
        dest="wl_command", required=True)
    run = wl.add_parser("run", help="refine one graph to stability")
    run.add_argument("--graph", required=True)
    run.add_argument("--labels")
    run.add_argument("--variant", required=True,
                     choices=["1wl", "1rwl", "weak", "krlwl", "delta-klwl", "oblivious-kwl"])
    run.add_argument("-k", type=int, default=1)
    run.add_argument("--max-iter", type=int, default=None)
    run.add_argument("--tuple-cap", type=int, default=TUPLE_ENTRY_CAP)
    run.add_argument("--out", default="-")
    run.set_defaults(func=_cmd_wl_run)
    compare = wl.add_parser("compare", help="run two graphs in parallel")
    compare.add_argument("--graph-a", required=True)
    compare.add_argument("--labels-a")
    compare.add_argument("--graph-b", required=True)
    compare.add_argument("--labels-b")
    compare.add_argument("--variant", required=True,
                         choices=["1wl", "1rwl", "weak", "krlwl", "delta-klwl", "oblivious-kwl"])
    compare.add_argument("-k", type=int, default=1)
    compare.add_argument("--tuple-cap", type=int, default=TUPLE_ENTRY_CAP)
    compare.add_argument("--out", default="-")
    compare.set_defaults(func=_cmd_wl_compare)

    gnn = sub.add_parser("gnn", help="forward passes").add_subparsers(
        dest="gnn_command", required=True)
    forward = gnn.add_parser("forward", help="seeded multi-layer forward pass")
    forward.add_argument("--graph", required=True)
    forward.add_argument("--labels")
    forward.add_argument("--arch", required=True, choices=["rgcn", "compgcn", "krn"])
    forward.add_argument("--config")
    forward.add_argument("--layers", type=int, default=2)
    forward.add_argument("--seed", type=int, default=7)
    forward.add_argument("--activation", default="relu",
                         choices=["relu", "sign", "identity"])
    forward.add_argument("--out", default="-")
    forward.set_defaults(func=_cmd_gnn_forward)

    verify = sub.add_parser("verify", help="theorem suites and consistency checks")
    verify.add_argument("mode", nargs="?", choices=["consistency"])
    verify.add_argument("--suite", choices=list(SUITE_IDS))
    verify.add_argument("--all", action="store_true")
    verify.add_argument("--config")
    verify.add_argument("--graph")
    verify.add_argument("--labels")
    verify.add_argument("--pair")
    verify.add_argument("--layers", type=int, default=3)
    verify.add_argument("--seeds", type=int, default=5)
    verify.add_argument("--width", type=int, default=16)
    verify.add_argument("--out", default="-")
    verify.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    except RelWLError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
