"""Render metric reports and score tables as markdown, CSV or JSON.

Markdown rounds to two decimals; CSV and JSON keep full precision. CSV
output uses the metric-row schema, so it can be read back with
:func:`msdecomp.ingestion.load_metric_rows`.
"""

from __future__ import annotations

import enum
import json
from decimal import ROUND_HALF_UP, Decimal

from msdecomp.ingestion import ROW_COLUMNS, dump_metric_rows
from msdecomp.metrics import MetricReport
from msdecomp.scoring import METRICS, MetricRow, ScoreTable


class RenderFormat(str, enum.Enum):
    MARKDOWN = "markdown"
    CSV = "csv"
    STRUCTURED = "structured"


def fmt2(value) -> str:
    """Two decimals, halves rounded away from zero (0.125 -> 0.13)."""
    if value is None:
        return "-"
    return str(Decimal(repr(float(value))).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def _table(header: list[str], rows: list[list[str]]) -> list[str]:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(r) + " |" for r in rows]
    return lines


def report_row(report: MetricReport) -> MetricRow:
    v = report.values()
    return MetricRow(report.tool, v["sm"], v["ifn"], v["icp"], v["ned"], report.micro)


def _pair_key(names, pair) -> str:
    return f"{names[pair[0]]}->{names[pair[1]]}"


def report_to_dict(report: MetricReport) -> dict:
    names = report.services
    return {
        "system": report.system,
        "tool": report.tool,
        "micro": report.micro,
        "policy": report.policy.as_dict(),
        "sm": report.sm.sm,
        "ifn": report.ifn.ifn,
        "icp": report.icp.aggregate,
        "ned": report.ned.ned,
        "services": [
            {
                "name": name,
                "size": report.ned.sizes[i],
                "mu": report.sm.mu[i],
                "scoh": report.sm.scoh[i],
                "interfaces": sorted(report.ifn.interfaces[i]),
                "ifn": report.ifn.ifn_per_service[i],
            }
            for i, name in enumerate(names)
        ],
        "sm_detail": {
            "cohesion": report.sm.cohesion,
            "coupling": report.sm.coupling,
            "pairs": [
                {"a": names[i], "b": names[j], "gamma": report.sm.gamma[i, j], "scop": report.sm.scop[i, j]}
                for (i, j) in sorted(report.sm.scop)
            ],
        },
        "icp_detail": {
            "source": report.icp.source.value if report.icp.source else None,
            "inter_calls": report.icp.inter_calls,
            "total_calls": report.icp.total_calls,
            "pair_fractions": {_pair_key(names, p): f for p, f in report.icp.pair_fractions.items()},
        },
        "ned_detail": {
            "bounds": list(report.ned.bounds),
            "non_extreme_count": report.ned.non_extreme_count,
        },
    }


def _report_markdown(report: MetricReport) -> str:
    v = report.values()
    lines = [f"## {report.system}: {report.tool}", ""]
    lines += _table(["Tool", "SM", "IFN", "ICP", "NED", "Micro"],
                    [[report.tool, *(fmt2(v[m]) for m in METRICS), str(report.micro)]])
    lines += ["", "### Services", ""]
    lines += _table(
        ["Service", "Classes", "scoh", "Interfaces"],
        [[name, str(report.ned.sizes[i]), fmt2(report.sm.scoh[i]), str(report.ifn.ifn_per_service[i])]
         for i, name in enumerate(report.services)],
    )
    p = report.policy
    lines += ["", f"Edge policy: sm={p.sm_source.value}, icp={p.icp_source.value}, "
                  f"self-edges in cohesion={'yes' if p.include_self_edges_in_cohesion else 'no'}"]
    return "\n".join(lines) + "\n"


def table_to_dict(table: ScoreTable) -> dict:
    ranking = {r.tool: r.rank for r in table.ranking()}
    return {
        "benchmark": table.benchmark,
        "convention": table.convention.value,
        "weights": dict(zip(METRICS, table.weights.as_array().tolist())),
        "means": dict(zip(METRICS, table.means.tolist())),
        "stds": dict(zip(METRICS, table.stds.tolist())),
        "tools": [
            {
                "tool": row.tool,
                **{m: getattr(row, m) for m in METRICS},
                "micro": row.micro,
                "z": dict(zip(METRICS, table.z[k].tolist())),
                "score": float(table.scores[k]),
                "rank": ranking[row.tool],
                **({"reference_score": row.score} if row.score is not None else {}),
            }
            for k, row in enumerate(table.rows)
        ],
        "not_scored": [row.tool for row in table.unscored],
    }


def _ranked_rows(table: ScoreTable) -> list[MetricRow]:
    by_tool = {row.tool: row for row in table.rows}
    out = []
    for r in table.ranking():
        row = by_tool[r.tool]
        out.append(MetricRow(row.tool, row.sm, row.ifn, row.icp, row.ned, row.micro, r.score, r.rank))
    return out


def _table_markdown(table: ScoreTable) -> str:
    title = table.benchmark or "comparison"
    has_ref = any(row.score is not None for row in table.rows)
    header = ["Rank", "Tool", "SM", "IFN", "ICP", "NED", "Micro", "Score"]
    if has_ref:
        header.append("Reference")
    refs = {row.tool: row.score for row in table.rows}
    body = []
    for row in _ranked_rows(table):
        cells = [str(row.rank), row.tool, *(fmt2(getattr(row, m)) for m in METRICS),
                 "-" if row.micro is None else str(row.micro), fmt2(row.score)]
        if has_ref:
            cells.append(fmt2(refs[row.tool]))
        body.append(cells)
    lines = [f"## {title}", ""] + _table(header, body)
    w = table.weights
    lines += ["", f"Weights (SM, IFN, ICP, NED) = ({w.sm:g}, {w.ifn:g}, {w.icp:g}, {w.ned:g}); "
                  f"std convention: {table.convention.value}"]
    if table.unscored:
        lines.append("Not scored (missing metrics): " + ", ".join(r.tool for r in table.unscored))
    return "\n".join(lines) + "\n"


def render_report(obj: MetricReport | ScoreTable, fmt: RenderFormat | str = RenderFormat.MARKDOWN) -> str:
    """Deterministic text rendering of a report or a score table."""
    fmt = RenderFormat(fmt)
    if isinstance(obj, MetricReport):
        if fmt is RenderFormat.MARKDOWN:
            return _report_markdown(obj)
        if fmt is RenderFormat.CSV:
            return dump_metric_rows([report_row(obj)])
        return json.dumps(report_to_dict(obj), indent=2) + "\n"
    if isinstance(obj, ScoreTable):
        if fmt is RenderFormat.MARKDOWN:
            return _table_markdown(obj)
        if fmt is RenderFormat.CSV:
            rows = _ranked_rows(obj) + [MetricRow(r.tool, r.sm, r.ifn, r.icp, r.ned, r.micro) for r in obj.unscored]
            return dump_metric_rows(rows, ROW_COLUMNS)
        return json.dumps(table_to_dict(obj), indent=2) + "\n"
    raise TypeError(f"cannot render {type(obj).__name__}")
