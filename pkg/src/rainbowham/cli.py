"""Command-line entry points.

Subcommands: generate (model to graph file), solve (graph file to outcome
JSON on stdout), verify (graph + cycle file to verdict, exit 2 on reject),
pipeline (full assembly on a graph file or a freshly sampled model),
absorber (single absorber search), rmbg (build / certify templates),
experiment (config JSON to CSV/JSON results).

Cycle files are a single line of whitespace-separated vertex ids.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .absorbers import AbsorberSearchBudget, find_absorber_search
from .graph import read_graph_file, verify_rainbow_hamilton_cycle, write_graph_file
from .harness import ExperimentConfig, emit_results, run_experiment
from .models import ModelParams, round_half_up, sample_perturbed_coloured
from .pipeline import PipelineFailure, PipelineParams, assemble_hamilton_cycle
from .rmbg import RmbgTemplate, build_rmbg, certify_robust_matchability
from .rng import RngStream
from .search import brute_force_rainbow_hc, exact_rainbow_hc, rainbow_dfs_path


def _print_json(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip() != ""]


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kind", default="complete-bipartite-bidirected")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--C", type=float, required=True)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)


def _sample_from_flags(args) -> tuple:
    params = ModelParams(n=args.n, delta=args.delta, C=args.C, q=args.q,
                         seed_kind=args.kind)
    stream = RngStream(args.seed).child("generate")
    return sample_perturbed_coloured(params, stream), params


def cmd_generate(args) -> int:
    dig, params = _sample_from_flags(args)
    write_graph_file(dig, args.out)
    print(f"wrote n={dig.n} kappa={dig.kappa} edges={dig.edge_count} to {args.out}")
    return 0


def cmd_solve(args) -> int:
    dig = read_graph_file(args.graph)
    if args.mode == "dfs":
        path = rainbow_dfs_path(dig, args.k)
        _print_json({"mode": "dfs", "k": args.k,
                     "path": list(path.vertices), "length": path.length})
        return 0
    if args.mode == "brute":
        out = brute_force_rainbow_hc(dig)
    else:
        out = exact_rainbow_hc(dig, args.budget)
    _print_json({
        "mode": args.mode, "status": out.status,
        "cycle": None if out.cycle is None else list(out.cycle),
        "nodes": out.nodes, "wall_ms": out.wall_ms,
    })
    return 0


def cmd_verify(args) -> int:
    dig = read_graph_file(args.graph)
    with open(args.cycle, "r", encoding="ascii") as fh:
        seq = [int(tok) for tok in fh.read().split()]
    verdict = verify_rainbow_hamilton_cycle(dig, seq)
    _print_json({
        "accepted": verdict.accepted,
        "violation": None if verdict.accepted else {
            "tag": verdict.violation.tag,
            "witness": repr(verdict.violation.witness),
        },
    })
    return 0 if verdict.accepted else 2


def cmd_pipeline(args) -> int:
    if args.graph is not None:
        dig = read_graph_file(args.graph)
    else:
        for flag in ("n", "delta", "C"):
            if getattr(args, flag) is None:
                raise SystemExit(f"--{flag} is required without --graph")
        dig, _ = _sample_from_flags(args)
    params = PipelineParams(mu=args.mu, d=args.d, k=args.k)
    stream = RngStream(args.seed).child("pipeline")
    packed = {"mu": params.mu, "d": params.d, "k": params.k}
    t0 = time.perf_counter()
    try:
        cycle = assemble_hamilton_cycle(dig, params, stream)
    except PipelineFailure as exc:
        ms = (time.perf_counter() - t0) * 1000.0
        _print_json({"status": "failure", "stage": exc.stage, "detail": exc.detail,
                     "params": packed, "seed": args.seed,
                     "timings": {"total_ms": ms}})
        return 2
    ms = (time.perf_counter() - t0) * 1000.0
    _print_json({"status": "found", "cycle": list(cycle),
                 "params": packed, "seed": args.seed,
                 "timings": {"total_ms": ms}})
    return 0


def cmd_absorber(args) -> int:
    dig = read_graph_file(args.graph)
    allowed_v = set(range(dig.n)) - set(args.exclude_vertices)
    allowed_c = set(range(dig.kappa)) - set(args.exclude_colours)
    budget = AbsorberSearchBudget(max_tuples=args.budget, max_restarts=args.restarts)
    rng = None if args.seed is None else RngStream(args.seed).child("absorber")
    res = find_absorber_search(dig, args.v, args.c, allowed_v, allowed_c, budget, rng)
    if res.absorber is None:
        _print_json({"found": False, "stage": res.stage})
        return 2
    a = res.absorber
    _print_json({
        "found": True,
        "v": a.v, "c": a.c,
        "roles": dict(a.roles),
        "edges": [
            {"from": p, "to": q, "colour": col}
            for (p, q), col in sorted(a.edge_colours.items())
        ],
    })
    return 0


def cmd_rmbg_build(args) -> int:
    template = build_rmbg(args.m, args.d, RngStream(args.seed).child("rmbg"))
    doc = template.to_json()
    if args.out is None:
        _print_json(doc)
    else:
        with open(args.out, "w", encoding="ascii") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote template m={args.m} d={args.d} to {args.out}")
    return 0


def cmd_rmbg_certify(args) -> int:
    with open(args.template, "r", encoding="ascii") as fh:
        template = RmbgTemplate.from_json(json.load(fh))
    rng = None if args.seed is None else RngStream(args.seed).child("certify")
    report = certify_robust_matchability(template, args.mode, args.trials, rng)
    _print_json({
        "mode": report.mode, "passed": report.passed,
        "pairs_checked": report.pairs_checked,
        "counterexample": None if report.counterexample is None else {
            "X": list(report.counterexample[0]), "Y": list(report.counterexample[1]),
        },
    })
    return 0 if report.passed else 2


def cmd_experiment(args) -> int:
    with open(args.config, "r", encoding="ascii") as fh:
        config = ExperimentConfig.from_dict(json.load(fh))
    out = args.out if args.out is not None else config.output
    if out is None:
        raise SystemExit("no output path: pass --out or set \"output\" in the config")
    table = run_experiment(config)
    emit_results(table, args.format, out)
    print(f"wrote {len(table.rows)} rows to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rainbowham",
        description="Rainbow Hamilton cycles in coloured perturbed digraphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample a model instance to a graph file")
    _add_model_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="run a solver on a graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--mode", choices=("exact", "brute", "dfs"), default="exact")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--k", type=int, default=2)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="verify a cycle file against a graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--cycle", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pipeline", help="assemble a rainbow Hamilton cycle")
    p.add_argument("--graph", default=None)
    p.add_argument("--kind", default="complete-bipartite-bidirected")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--C", type=float, default=None)
    p.add_argument("--q", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mu", type=float, default=0.01)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--k", type=int, default=None)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("absorber", help="search one absorber in a graph file")
    p.add_argument("--graph", required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--exclude-vertices", type=_int_list, default=[])
    p.add_argument("--exclude-colours", type=_int_list, default=[])
    p.add_argument("--budget", type=int, default=500_000)
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_absorber)

    p = sub.add_parser("rmbg", help="robustly matchable template tools")
    rsub = p.add_subparsers(dest="rmbg_command", required=True)
    pb = rsub.add_parser("build", help="build a template")
    pb.add_argument("--m", type=int, required=True)
    pb.add_argument("--d", type=int, required=True)
    pb.add_argument("--seed", type=int, default=0)
    pb.add_argument("--out", default=None)
    pb.set_defaults(func=cmd_rmbg_build)
    pc = rsub.add_parser("certify", help="certify robust matchability")
    pc.add_argument("--template", required=True)
    pc.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    pc.add_argument("--trials", type=int, default=1000)
    pc.add_argument("--seed", type=int, default=None)
    pc.set_defaults(func=cmd_rmbg_certify)

    p = sub.add_parser("experiment", help="run an experiment config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_experiment)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
