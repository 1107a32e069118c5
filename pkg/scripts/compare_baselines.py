"""Score every baseline decomposer on one generated monolith.

Generates a planted graph, runs the five baselines plus the planted truth,
and prints the composite-score table.

    python3 scripts/compare_baselines.py --services 5 --p-inter 0.03 --seed 3
"""

import argparse

from msdecomp.decomposers import (
    HierarchicalParams,
    HillClimbParams,
    decompose_hierarchical,
    decompose_hillclimb,
    decompose_monolith,
    decompose_random,
    decompose_singletons,
)
from msdecomp.metrics import evaluate_all
from msdecomp.planted import PlantedSpec, generate_planted
from msdecomp.report import render_report, report_row
from msdecomp.scoring import composite_scores


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--services", type=int, default=5)
    parser.add_argument("--size-range", type=int, nargs=2, default=(5, 12))
    parser.add_argument("--p-intra", type=float, default=0.6)
    parser.add_argument("--p-inter", type=float, default=0.03)
    parser.add_argument("--seed", type=int, default=3)
    parser.add_argument("--format", choices=["markdown", "csv", "structured"], default="markdown")
    args = parser.parse_args(argv)

    spec = PlantedSpec(args.services, tuple(args.size_range), args.p_intra, args.p_inter,
                       runtime_count_range=(1, 50), seed=args.seed)
    graph, truth = generate_planted(spec)
    candidates = [
        truth,
        decompose_monolith(graph),
        decompose_singletons(graph),
        decompose_random(graph, args.services, args.seed),
        decompose_hillclimb(graph, HillClimbParams(seed=args.seed)),
        decompose_hierarchical(graph, HierarchicalParams("average", 0.5)),
    ]
    rows = [report_row(evaluate_all(graph, d)) for d in candidates]
    print(render_report(composite_scores(rows, benchmark=graph.name), args.format), end="")


if __name__ == "__main__":
    main()
