"""Recompute composite scores for the bundled tool-comparison tables.

Prints, per benchmark and std convention, the recomputed score next to the
published one, the Spearman correlation between the two columns and the
median published/recomputed ratio.

    python3 scripts/reproduce_published_scores.py [--markdown]
"""

import argparse

import numpy as np
from scipy.stats import spearmanr

from msdecomp.data import PUBLISHED_BENCHMARKS, published_table_path
from msdecomp.ingestion import read_metric_rows
from msdecomp.scoring import StdConvention, composite_scores


def summarise(benchmark: str, convention: StdConvention):
    table = composite_scores(read_metric_rows(published_table_path(benchmark)), convention=convention, benchmark=benchmark)
    published = np.array([r.score for r in table.rows])
    rho = spearmanr(table.scores, published).statistic
    return table, published, rho


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--markdown", action="store_true", help="one summary table instead of per-tool detail")
    args = parser.parse_args(argv)

    if args.markdown:
        print("| Benchmark | Std | Spearman | Top tool | Recomputed | Published | Published / recomputed |")
        print("|---|---|---|---|---|---|---|")
    for bench in PUBLISHED_BENCHMARKS:
        for convention in StdConvention:
            table, published, rho = summarise(bench, convention)
            top = table.ranking()[0]
            ref = published[[r.tool for r in table.rows].index(top.tool)]
            ratio = float(np.median(published / table.scores))
            if args.markdown:
                print(f"| {bench} | {convention.value} | {rho:.2f} | {top.tool} | {top.score:.2f} | {ref:.2f} "
                      f"| {ratio:.2f} |")
                continue
            print(f"== {bench} ({convention.value}), Spearman {rho:.3f}, median ratio {ratio:.2f}")
            for r in table.ranking():
                pub = published[[row.tool for row in table.rows].index(r.tool)]
                print(f"  {r.rank:>2}  {r.tool:<12} recomputed {r.score:+.3f}   published {pub:+.2f}")
            if table.unscored:
                print("  not scored:", ", ".join(row.tool for row in table.unscored))


if __name__ == "__main__":
    main()
