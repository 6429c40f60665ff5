"""Command-line interface.

Subcommands: ``gen-graph``, ``simulate``, ``reconstruct``, ``evaluate``,
``experiment``.  Exit codes: 0 on success, 2 on configuration errors,
3 when an instance is infeasible.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .experiment import (
    ALGORITHMS,
    MODELS,
    ConfigError,
    ExperimentConfig,
    generate_ba_graph,
    run_experiment,
    write_csv,
)
from .graph import (
    ParseError,
    load_edge_list,
    parse_labeled_edge_list,
    parse_report_file,
    write_edge_list,
    write_report_file,
)
from .metrics import evaluate as evaluate_tree
from .reconstruct import InfeasibleInstanceError, read_tree, write_tree
from .simulate import (
    RngSeed,
    RunFailed,
    read_cascade,
    simulate_ct,
    simulate_ic,
    simulate_si,
    simulate_sp,
    write_cascade,
)

EXIT_OK = 0
EXIT_FAILED_RUN = 1
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="castree",
        description="Reconstruct minimal temporally consistent cascade trees "
                    "from timestamped infection reports.")
    sub = parser.add_subparsers(dest="command", required=True)

    gg = sub.add_parser("gen-graph", help="generate a preferential-attachment graph")
    gg.add_argument("--nodes", type=int, required=True)
    gg.add_argument("--attach", type=int, required=True)
    gg.add_argument("--seed", type=int, default=0)
    gg.add_argument("--out", required=True)

    sim = sub.add_parser("simulate", help="simulate a ground-truth cascade")
    sim.add_argument("--graph", required=True)
    sim.add_argument("--model", choices=MODELS, required=True)
    sim.add_argument("--p", type=float, default=0.5,
                     help="transmission probability for si/ic")
    sim.add_argument("--beta", type=float, default=1.0, help="ct delay rate")
    sim.add_argument("--stop", type=float, default=0.5,
                     help="stop fraction of nodes")
    sim.add_argument("--source", type=int, default=None,
                     help="seed node (default: uniform random)")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", required=True)

    rec = sub.add_parser("reconstruct", help="reconstruct a cascade tree from reports")
    rec.add_argument("--graph", required=True)
    rec.add_argument("--reports", required=True)
    rec.add_argument("--algo", choices=sorted(ALGORITHMS), required=True)
    rec.add_argument("--out", required=True)

    ev = sub.add_parser("evaluate", help="score a reconstructed tree against a cascade")
    ev.add_argument("--tree", required=True)
    ev.add_argument("--cascade", required=True)
    ev.add_argument("--graph", required=True)

    ex = sub.add_parser("experiment", help="run a full evaluation grid, emit CSV")
    ex.add_argument("--config", help="JSON config file; flags override its values")
    ex.add_argument("--graph", help="edge-list file")
    ex.add_argument("--ba-nodes", type=int)
    ex.add_argument("--ba-attach", type=int)
    ex.add_argument("--model", choices=MODELS)
    ex.add_argument("--p", type=float)
    ex.add_argument("--beta", type=float)
    ex.add_argument("--stop", type=float)
    ex.add_argument("--q", type=float, action="append",
                    help="reporting probability (repeatable)")
    ex.add_argument("--algo", action="append", choices=sorted(ALGORITHMS),
                    help="algorithm to run (repeatable)")
    ex.add_argument("--runs", type=int)
    ex.add_argument("--seed", type=int)
    ex.add_argument("--out")
    ex.add_argument("--time", action="store_true",
                    help="record wall-clock reconstruction time per row "
                         "(breaks byte-for-byte reproducibility)")
    return parser


def _cmd_gen_graph(args) -> int:
    rng = RngSeed(args.seed, 0).generator()
    g = generate_ba_graph(args.nodes, args.attach, rng)
    with open(args.out, "w", encoding="utf-8") as f:
        write_edge_list(g, f)
    print(f"wrote {g.node_count} nodes, {g.edge_count} edges to {args.out}")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    g = load_edge_list(args.graph)
    rng = RngSeed(args.seed, 0).generator()
    source = args.source if args.source is not None else int(rng.integers(g.node_count))
    if args.model == "si":
        cascade = simulate_si(g, source, args.p, args.stop, rng)
    elif args.model == "ic":
        cascade = simulate_ic(g, source, args.p, rng)
    elif args.model == "ct":
        cascade = simulate_ct(g, source, args.beta, args.stop, rng)
    else:
        cascade = simulate_sp(g, source, args.stop)
    with open(args.out, "w", encoding="utf-8") as f:
        write_cascade(cascade, f)
    print(f"cascade from {source}: {cascade.infected_count} infected, wrote {args.out}")
    return EXIT_OK


def _cmd_reconstruct(args) -> int:
    g = load_edge_list(args.graph)
    reports = parse_report_file(Path(args.reports).read_text(encoding="utf-8"))
    tree = ALGORITHMS[args.algo](g, reports)
    with open(args.out, "w", encoding="utf-8") as f:
        write_tree(tree, f)
    print(f"{args.algo}: tree with {tree.edge_count} edges, wrote {args.out}")
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    g = load_edge_list(args.graph)
    tree = read_tree(Path(args.tree).read_text(encoding="utf-8"))
    cascade = read_cascade(Path(args.cascade).read_text(encoding="utf-8"),
                           g.node_count)
    rec = evaluate_tree(tree, cascade)
    print(json.dumps({
        "tree_size": rec.tree_size,
        "precision": rec.precision,
        "recall": rec.recall,
        "order_accuracy": rec.order_accuracy,
    }))
    return EXIT_OK


def _cmd_experiment(args) -> int:
    if args.config:
        cfg = ExperimentConfig.from_file(args.config)
    else:
        cfg = ExperimentConfig(model=args.model or "si", graph_path=None,
                               ba_nodes=None)
    cfg = cfg.override(
        graph_path=args.graph,
        ba_nodes=args.ba_nodes,
        ba_attach=args.ba_attach,
        model=args.model,
        p=args.p,
        beta=args.beta,
        stop_fraction=args.stop,
        q_list=args.q,
        algorithms=args.algo,
        runs=args.runs,
        master_seed=args.seed,
        output_path=args.out,
        measure_runtime=True if args.time else None,
    )
    cfg.validate()
    if cfg.output_path is None:
        raise ConfigError("an output path is required (--out or config output_path)")
    result = run_experiment(cfg)
    write_csv(result.rows, cfg.output_path)
    print(f"wrote {len(result.rows)} rows to {cfg.output_path}")
    if result.failures:
        print(f"{len(result.failures)} failed runs excluded:", file=sys.stderr)
        for fr in result.failures[:20]:
            print(f"  q={fr.q} run={fr.run} algo={fr.algo}: {fr.reason}",
                  file=sys.stderr)
        if len(result.failures) > 20:
            print(f"  ... and {len(result.failures) - 20} more", file=sys.stderr)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "gen-graph": _cmd_gen_graph,
        "simulate": _cmd_simulate,
        "reconstruct": _cmd_reconstruct,
        "evaluate": _cmd_evaluate,
        "experiment": _cmd_experiment,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleInstanceError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except RunFailed as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return EXIT_FAILED_RUN
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
