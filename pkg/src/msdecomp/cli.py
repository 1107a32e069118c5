"""Command-line entry point: ``msdecomp {evaluate,compare,decompose,generate}``.

Exit codes: 0 success, 1 domain error (validation, parsing, I/O), 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from msdecomp.data import PUBLISHED_BENCHMARKS, published_table_path
from msdecomp.decomposers import (
    HierarchicalParams,
    HillClimbParams,
    decompose_hierarchical,
    decompose_hillclimb,
    decompose_monolith,
    decompose_random,
    decompose_singletons,
)
from msdecomp.errors import DecompError
from msdecomp.ingestion import (
    dump_decomposition,
    dump_graph,
    read_decomposition,
    read_graph,
    read_metric_rows,
    write_text,
)
from msdecomp.metrics import EdgePolicy, IcpSource, SmSource, evaluate_all
from msdecomp.planted import PlantedSpec, generate_planted
from msdecomp.report import RenderFormat, render_report, report_row
from msdecomp.scoring import StdConvention, WeightVector, composite_scores


def _emit(text: str, out: str | None) -> None:
    if out:
        write_text(out, text)
    else:
        sys.stdout.write(text)


def _range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}") from None
    return lo, hi


def _weights(text: str) -> WeightVector:
    try:
        return WeightVector.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _policy(args) -> EdgePolicy:
    return EdgePolicy(args.sm_source, args.icp_source, not args.no_self_cohesion)


def _add_policy_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--sm-source", choices=[s.value for s in SmSource], default=SmSource.STATIC_DISTINCT.value)
    p.add_argument("--icp-source", choices=[s.value for s in IcpSource],
                   default=IcpSource.RUNTIME_ELSE_STATIC.value)
    p.add_argument("--no-self-cohesion", action="store_true", help="ignore self-calls when computing cohesion")
    p.add_argument("--ned-bounds", type=_range, default=(5, 20), metavar="LO:HI")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="msdecomp", description="Evaluate and compare microservice decompositions.")
    sub = parser.add_subparsers(dest="command", required=True)
    formats = [f.value for f in RenderFormat]

    ev = sub.add_parser("evaluate", help="compute SM, IFN, ICP and NED for one decomposition")
    ev.add_argument("--graph", required=True)
    ev.add_argument("--decomposition", required=True)
    _add_policy_flags(ev)
    ev.add_argument("--format", choices=formats, default="markdown")
    ev.add_argument("-o", "--output")

    cmp_ = sub.add_parser("compare", help="z-score composite ranking of several tools")
    src = cmp_.add_mutually_exclusive_group(required=True)
    src.add_argument("--metrics", help="metric-row CSV table")
    src.add_argument("--published", choices=PUBLISHED_BENCHMARKS, help="bundled published table for a benchmark")
    src.add_argument("--decompositions", help="directory of decomposition documents (needs --graph)")
    cmp_.add_argument("--graph")
    _add_policy_flags(cmp_)
    cmp_.add_argument("--weights", type=_weights, default=WeightVector(), metavar="SM,IFN,ICP,NED")
    cmp_.add_argument("--std", choices=[c.value for c in StdConvention], default="population")
    cmp_.add_argument("--benchmark", default=None, help="label for the table")
    cmp_.add_argument("--format", choices=formats, default="markdown")
    cmp_.add_argument("-o", "--output")

    dec = sub.add_parser("decompose", help="run a baseline decomposer")
    dec.add_argument("--graph", required=True)
    dec.add_argument("--algo", required=True, choices=["monolith", "singletons", "random", "hillclimb", "hierarchical"])
    dec.add_argument("--seed", type=int, default=0)
    dec.add_argument("--k", type=int, help="service count (random)")
    dec.add_argument("--restarts", type=int, default=20)
    dec.add_argument("--max-iterations", type=int)
    dec.add_argument("--min-services", type=int)
    dec.add_argument("--max-services", type=int)
    dec.add_argument("--linkage", choices=["average", "single", "complete"], default="average")
    dec.add_argument("--threshold", type=float, help="distance threshold in (0, 1] (hierarchical)")
    dec.add_argument("--clusters", type=int, help="target cluster count (hierarchical)")
    dec.add_argument("--min-cluster-size", type=int, default=1)
    dec.add_argument("-o", "--output")

    gen = sub.add_parser("generate", help="sample a planted-partition monolith")
    gen.add_argument("--services", type=int, required=True)
    gen.add_argument("--size-range", type=_range, required=True, metavar="LO:HI")
    gen.add_argument("--p-intra", type=float, required=True)
    gen.add_argument("--p-inter", type=float, required=True)
    gen.add_argument("--runtime-counts", type=_range, metavar="LO:HI", help="also emit runtime edges")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--name", default="planted")
    gen.add_argument("-o", "--output", required=True, help="graph document path")
    gen.add_argument("--truth", required=True, help="ground-truth decomposition path")
    return parser


def _evaluate(args, parser) -> None:
    graph = read_graph(args.graph)
    decomposition = read_decomposition(args.decomposition, graph)
    report = evaluate_all(graph, decomposition, _policy(args), args.ned_bounds)
    _emit(render_report(report, args.format), args.output)


def _compare(args, parser) -> None:
    if args.decompositions:
        if not args.graph:
            parser.error("--decompositions requires --graph")
        graph = read_graph(args.graph)
        policy = _policy(args)
        rows = []
        for path in sorted(Path(args.decompositions).glob("*.json")):
            report = evaluate_all(graph, read_decomposition(path, graph), policy, args.ned_bounds)
            row = report_row(report)
            rows.append(row if row.tool else replace(row, tool=path.stem))
        benchmark = args.benchmark or graph.name
    elif args.published:
        rows = read_metric_rows(published_table_path(args.published))
        benchmark = args.benchmark or args.published
    else:
        rows = read_metric_rows(args.metrics)
        benchmark = args.benchmark or Path(args.metrics).stem
    table = composite_scores(rows, args.weights, args.std, benchmark)
    _emit(render_report(table, args.format), args.output)


def _decompose(args, parser) -> None:
    if args.algo == "random" and args.k is None:
        parser.error("--algo random requires --k")
    graph = read_graph(args.graph)
    try:
        if args.algo == "monolith":
            result = decompose_monolith(graph)
        elif args.algo == "singletons":
            result = decompose_singletons(graph)
        elif args.algo == "random":
            result = decompose_random(graph, args.k, args.seed)
        elif args.algo == "hillclimb":
            params = HillClimbParams(args.restarts, args.max_iterations, args.min_services,
                                     args.max_services, args.seed)
            result = decompose_hillclimb(graph, params)
        else:
            if args.threshold is None and args.clusters is None:
                args.threshold = 0.5
            params = HierarchicalParams(args.linkage, args.threshold, args.clusters, args.min_cluster_size)
            result = decompose_hierarchical(graph, params)
    except DecompError:
        raise
    except ValueError as exc:
        parser.error(str(exc))
    _emit(dump_decomposition(result), args.output)


def _generate(args, parser) -> None:
    spec = PlantedSpec(args.services, args.size_range, args.p_intra, args.p_inter,
                       args.runtime_counts, args.seed, args.name)
    graph, truth = generate_planted(spec)
    write_text(args.output, dump_graph(graph))
    write_text(args.truth, dump_decomposition(truth))


COMMANDS = {"evaluate": _evaluate, "compare": _compare, "decompose": _decompose, "generate": _generate}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        COMMANDS[args.command](args, parser)
    except DecompError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
