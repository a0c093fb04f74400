"""Command-line front end.

Subcommands: train, sparsify, detect, bench, ablate. Options shared with
config files use the same flat key=value keys; the WALKSPARSE_SEED
environment variable overrides the top-level seed everywhere. All output
files are byte-reproducible for a fixed seed (timing columns excepted:
disable them with measure_time=off when diffing bench outputs).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import evaluation, harness
from .assembly import AssemblyBudget
from .gan import load_model, save_model
from .graph import (NodeRelabeling, export_edge_list, export_labels,
                    load_edge_list, load_labels)
from .harness import (ALGORITHMS, METHODS, SEED_ENV_VAR, VARIANTS,
                      assemble_from_model, experiment_from_mapping,
                      parse_config_file, pipeline_config_from_mapping,
                      run_baseline, run_grid, stream_seed, substream,
                      train_pipeline_model, write_rows, write_summary)


def _resolve_seed(args_seed, mapping):
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        return int(env)
    if args_seed is not None:
        return int(args_seed)
    return int(mapping.get("seed", 0))


def _load_mapping(path):
    return parse_config_file(path) if path else {}


def cmd_train(args):
    mapping = _load_mapping(args.config)
    seed = _resolve_seed(args.seed, mapping)
    graph, _ = load_edge_list(args.input)
    pcfg = pipeline_config_from_mapping(mapping, seed=seed)
    variant = mapping.get("variant", "GSGAN")

    gp, stats = train_pipeline_model(graph, pcfg, variant=variant, seed=seed)
    tcfg, _ = harness.variant_config(pcfg, variant)
    save_model(args.model, gp, tcfg)
    if args.stats:
        stats.to_csv(args.stats, config=tcfg.to_dict())
    print(f"trained {variant} on {graph.node_count} nodes / "
          f"{graph.edge_count} edges -> {args.model}")
    return 0


def cmd_sparsify(args):
    mapping = _load_mapping(args.config)
    seed = _resolve_seed(args.seed, mapping)
    graph, relabel = load_edge_list(args.input)

    if args.method == "GSGAN":
        pcfg = pipeline_config_from_mapping(mapping, seed=seed)
        variant = mapping.get("variant", "GSGAN")
        if args.model:
            gp, _ = load_model(args.model)
            if gp.node_count != graph.node_count:
                raise SystemExit("model was trained on a different node count")
        else:
            gp, _ = train_pipeline_model(graph, pcfg, variant=variant, seed=seed)
        sparse, report = assemble_from_model(gp, graph, args.ratio, pcfg, seed=seed)
        if args.report:
            with open(args.report, "w") as fh:
                fh.write(report.to_json() + "\n")
    else:
        sparse = run_baseline(graph, args.method, args.ratio, seed=seed)
        if args.report:
            report = {"target_edges": sparse.edge_count,
                      "edge_count": sparse.edge_count,
                      "artificial_edges": 0}
            with open(args.report, "w") as fh:
                fh.write(json.dumps(report, indent=2, sort_keys=True) + "\n")

    export_edge_list(sparse, relabel, args.output)
    print(f"{args.method} ratio {args.ratio}: kept {sparse.edge_count} of "
          f"{graph.edge_count} edges -> {args.output}")
    return 0


def cmd_detect(args):
    mapping = _load_mapping(args.config)
    seed = _resolve_seed(args.seed, mapping)
    graph, relabel = load_edge_list(args.input)

    rng = substream(seed, "detection", args.algorithm)
    partition, seconds = evaluation.timed(
        lambda: harness.detect(graph, args.algorithm, rng))

    q = evaluation.modularity(graph, partition)
    communities = len(set(int(x) for x in partition))
    print(f"{args.algorithm}: {communities} communities, modularity {q:.6f}, "
          f"{seconds:.3f}s")
    if args.labels:
        truth = load_labels(args.labels, relabel, graph.node_count)
        print(f"ari {evaluation.ari(truth, partition):.6f}")
    if args.output:
        export_labels(partition, relabel, args.output)
    return 0


def cmd_bench(args):
    mapping = _load_mapping(args.config)
    env = os.environ.get(SEED_ENV_VAR)
    cfg = experiment_from_mapping(mapping, seed_override=env)
    rows = run_grid(cfg)
    write_rows(rows, args.output)
    if args.summary:
        write_summary(rows, args.summary)
    errors = sum(1 for r in rows if r.error is not None)
    print(f"{len(rows)} rows ({errors} errors) -> {args.output}")
    return 0


def cmd_ablate(args):
    mapping = _load_mapping(args.config)
    # the ablation grid runs the model variants only
    mapping.setdefault("variants", ",".join(VARIANTS))
    mapping["methods"] = ""
    mapping.setdefault("algorithms", "louvain")
    env = os.environ.get(SEED_ENV_VAR)
    cfg = experiment_from_mapping(mapping, seed_override=env)
    rows = run_grid(cfg)
    write_rows(rows, args.output)
    if args.summary:
        write_summary(rows, args.summary)
    print(f"{len(rows)} rows -> {args.output}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="walksparse",
        description="Sparsify graphs for community detection with a "
                    "generative walk model and reference baselines.")
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="log warnings and progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train the walk generator on a graph")
    p.add_argument("--input", required=True, help="edge-list file")
    p.add_argument("--model", required=True, help="output checkpoint path")
    p.add_argument("--stats", help="output per-iteration loss CSV")
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("sparsify", help="sparsify a graph to a ratio")
    p.add_argument("--input", required=True)
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--ratio", required=True, type=float,
                   help="percent of original edges to keep, in (0, 100]")
    p.add_argument("--output", required=True, help="sparsified edge-list path")
    p.add_argument("--report", help="assembly report JSON path")
    p.add_argument("--model", help="reuse a trained checkpoint (GSGAN only)")
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_sparsify)

    p = sub.add_parser("detect", help="run community detection")
    p.add_argument("--input", required=True)
    p.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    p.add_argument("--labels", help="ground-truth label file (prints ARI)")
    p.add_argument("--output", help="partition output file")
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("bench", help="run the full experiment grid")
    p.add_argument("--config", required=True)
    p.add_argument("--output", required=True, help="per-seed result CSV")
    p.add_argument("--summary", help="median-over-seeds companion CSV")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("ablate", help="run the model-variant ablation grid")
    p.add_argument("--config", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--summary")
    p.set_defaults(func=cmd_ablate)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.ERROR,
        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
