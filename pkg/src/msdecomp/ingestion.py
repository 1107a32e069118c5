"""Reading and writing graphs, decompositions and metric-row tables.

Graph document::

    {"name": str, "classes": [{"id": str}, ...],
     "edges": [{"src": str, "dst": str, "kind": "static"|"runtime", "count": int}, ...]}

Decomposition document::

    {"tool": str, "system": str, "services": [{"name": str, "classes": [str, ...]}, ...]}

Metric-row table: CSV with header ``tool,sm,ifn,icp,ned[,micro][,score][,rank]``.
Lines starting with ``#`` are comments. Blank or ``-`` metric cells mark a row
as incomplete. Unknown fields and columns are ignored with a warning.
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from pathlib import Path
from typing import Any, Mapping, Sequence

from msdecomp.errors import (
    BadCount,
    DuplicateClass,
    DuplicateEdge,
    EmptyTable,
    NonNumericCell,
    ParseError,
    UnknownEdgeEndpoint,
)
from msdecomp.model import (
    CallEdge,
    ClassNode,
    Decomposition,
    EdgeKind,
    MonolithGraph,
    Service,
    validate_decomposition,
)
from msdecomp.scoring import METRICS, MetricRow

GRAPH_FIELDS = {"name", "classes", "edges"}
CLASS_FIELDS = {"id", "attributes"}
EDGE_FIELDS = {"src", "dst", "kind", "count"}
DECOMPOSITION_FIELDS = {"tool", "system", "services"}
SERVICE_FIELDS = {"name", "classes"}
ROW_COLUMNS = ("tool", *METRICS, "micro", "score", "rank")
MISSING_CELLS = {"", "-"}


class UnknownFieldWarning(UserWarning):
    pass


def _warn_unknown(obj: Mapping, allowed: set[str], where: str) -> None:
    extra = sorted(set(obj) - allowed)
    if extra:
        warnings.warn(f"ignoring unknown field(s) {', '.join(extra)} in {where}", UnknownFieldWarning, stacklevel=3)


def _parse_json(document: str | bytes | Mapping) -> Any:
    if isinstance(document, Mapping):
        return document
    if isinstance(document, bytes):
        document = document.decode("utf-8")
    try:
        return json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, location=f"line {exc.lineno}, column {exc.colno}") from None


def _require(obj: Any, key: str, kind: type, where: str):
    if not isinstance(obj, Mapping) or key not in obj:
        raise ParseError(f"missing required field {key!r}", location=where)
    value = obj[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ParseError(f"field {key!r} must be {kind.__name__}", location=where)
    return value


def load_graph(document: str | bytes | Mapping) -> MonolithGraph:
    """Parse a graph document (JSON text or an already-decoded mapping).

    ``kind`` defaults to ``static`` and ``count`` to 1 when omitted.
    """
    doc = _parse_json(document)
    if not isinstance(doc, Mapping):
        raise ParseError("graph document must be an object")
    _warn_unknown(doc, GRAPH_FIELDS, "graph")
    name = _require(doc, "name", str, "graph")
    classes = []
    seen: set[str] = set()
    for i, item in enumerate(_require(doc, "classes", list, "graph")):
        where = f"classes[{i}]"
        cid = _require(item, "id", str, where)
        if not cid:
            raise ParseError("class id must be non-empty", location=where)
        _warn_unknown(item, CLASS_FIELDS, where)
        if cid in seen:
            raise DuplicateClass(cid, location=where)
        seen.add(cid)
        attrs = item.get("attributes", {})
        if not isinstance(attrs, Mapping):
            raise ParseError("attributes must be an object", location=where)
        classes.append(ClassNode(cid, {str(k): str(v) for k, v in attrs.items()}))
    edges = []
    keys = set()
    for i, item in enumerate(doc.get("edges", [])):
        where = f"edges[{i}]"
        src = _require(item, "src", str, where)
        dst = _require(item, "dst", str, where)
        _warn_unknown(item, EDGE_FIELDS, where)
        for end in (src, dst):
            if end not in seen:
                raise UnknownEdgeEndpoint(end, location=where)
        try:
            kind = EdgeKind(item.get("kind", "static"))
        except ValueError:
            raise ParseError(f"edge kind must be 'static' or 'runtime', got {item.get('kind')!r}",
                             location=where) from None
        count = item.get("count", 1)
        if isinstance(count, bool) or not isinstance(count, int) or count < 1:
            raise BadCount(count, location=where)
        if (src, dst, kind) in keys:
            raise DuplicateEdge(src, dst, kind.value, location=where)
        keys.add((src, dst, kind))
        edges.append(CallEdge(src, dst, kind, count))
    return MonolithGraph(name, tuple(classes), tuple(edges))


def graph_to_document(graph: MonolithGraph) -> dict:
    """Canonical document: classes in graph order, edges sorted by (src, dst, kind)."""
    classes = []
    for c in graph.classes:
        entry: dict[str, Any] = {"id": c.id}
        if c.attributes:
            entry["attributes"] = dict(sorted(c.attributes.items()))
        classes.append(entry)
    edges = sorted(graph.edges, key=lambda e: (e.src, e.dst, e.kind.value))
    return {
        "name": graph.name,
        "classes": classes,
        "edges": [{"src": e.src, "dst": e.dst, "kind": e.kind.value, "count": e.count} for e in edges],
    }


def dump_graph(graph: MonolithGraph) -> str:
    return json.dumps(graph_to_document(graph), indent=2) + "\n"


def parse_decomposition(document: str | bytes | Mapping) -> Decomposition:
    """Parse a decomposition document without checking it against a graph."""
    doc = _parse_json(document)
    if not isinstance(doc, Mapping):
        raise ParseError("decomposition document must be an object")
    _warn_unknown(doc, DECOMPOSITION_FIELDS, "decomposition")
    tool = doc.get("tool", "")
    system = doc.get("system", "")
    if not isinstance(tool, str) or not isinstance(system, str):
        raise ParseError("'tool' and 'system' must be strings", location="decomposition")
    services = []
    for i, item in enumerate(_require(doc, "services", list, "decomposition")):
        where = f"services[{i}]"
        name = _require(item, "name", str, where)
        members = _require(item, "classes", list, where)
        _warn_unknown(item, SERVICE_FIELDS, where)
        if not all(isinstance(m, str) for m in members):
            raise ParseError("service classes must be strings", location=where)
        if len(set(members)) != len(members):
            raise ParseError(f"service {name!r} lists a class twice", location=where)
        services.append(Service(name, frozenset(members)))
    return Decomposition(tool, system, tuple(services))


def load_decomposition(document: str | bytes | Mapping, graph: MonolithGraph) -> Decomposition:
    """Parse a decomposition document and validate it against ``graph``."""
    decomposition = parse_decomposition(document)
    if decomposition.system and decomposition.system != graph.name:
        warnings.warn(f"decomposition targets {decomposition.system!r} but graph is {graph.name!r}",
                      UserWarning, stacklevel=2)
    validate_decomposition(graph, decomposition)
    return decomposition


def decomposition_to_document(decomposition: Decomposition) -> dict:
    """Canonical document: services in their order, member classes sorted."""
    return {
        "tool": decomposition.tool,
        "system": decomposition.system,
        "services": [{"name": s.name, "classes": sorted(s.classes)} for s in decomposition.services],
    }


def dump_decomposition(decomposition: Decomposition) -> str:
    return json.dumps(decomposition_to_document(decomposition), indent=2) + "\n"


def read_graph(path: str | Path) -> MonolithGraph:
    return load_graph(Path(path).read_text(encoding="utf-8"))


def read_decomposition(path: str | Path, graph: MonolithGraph) -> Decomposition:
    return load_decomposition(Path(path).read_text(encoding="utf-8"), graph)


def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def _number(cell: str, column: str, line: int, integer: bool = False):
    cell = cell.strip()
    if cell in MISSING_CELLS:
        return None
    try:
        if integer:
            value = float(cell)
            if not value.is_integer():
                raise ValueError
            return int(value)
        return float(cell)
    except ValueError:
        raise NonNumericCell(f"column {column!r} holds non-numeric value {cell!r}", location=f"line {line}") from None


def load_metric_rows(table: str) -> list[MetricRow]:
    """Parse a metric-row CSV table.

    Rows with a blank (or ``-``) SM/IFN/ICP/NED cell are returned with the
    cell set to ``None``; :attr:`MetricRow.is_complete` is then False and the
    scoring functions leave them out.

    Raises:
        EmptyTable: no header or no data rows.
        ParseError: header lacks a required column or a row is ragged.
        NonNumericCell: a numeric column holds text.
    """
    numbered = [(i + 1, line) for i, line in enumerate(table.splitlines())
                if line.strip() and not line.lstrip().startswith("#")]
    if not numbered:
        raise EmptyTable("metric table has no header")
    reader = csv.reader(io.StringIO("\n".join(line for _, line in numbered)))
    header = [h.strip().lower() for h in next(reader)]
    missing = [c for c in ("tool", *METRICS) if c not in header]
    if missing:
        raise ParseError(f"header lacks column(s) {', '.join(missing)}", location=f"line {numbered[0][0]}")
    unknown = [h for h in header if h not in ROW_COLUMNS]
    if unknown:
        warnings.warn(f"ignoring unknown column(s) {', '.join(unknown)}", UnknownFieldWarning, stacklevel=2)
    rows = []
    for (line, _), cells in zip(numbered[1:], reader):
        if len(cells) != len(header):
            raise ParseError(f"expected {len(header)} cells, got {len(cells)}", location=f"line {line}")
        rec = dict(zip(header, cells))
        tool = rec["tool"].strip()
        if not tool:
            raise ParseError("empty tool name", location=f"line {line}")
        values = {m: _number(rec[m], m, line) for m in METRICS}
        rows.append(MetricRow(
            tool=tool,
            micro=_number(rec.get("micro", ""), "micro", line, integer=True),
            score=_number(rec.get("score", ""), "score", line),
            rank=_number(rec.get("rank", ""), "rank", line, integer=True),
            **values,
        ))
    if not rows:
        raise EmptyTable("metric table has a header but no rows")
    return rows


def read_metric_rows(path: str | Path) -> list[MetricRow]:
    return load_metric_rows(Path(path).read_text(encoding="utf-8"))


def _cell(value) -> str:
    if value is None:
        return ""
    return repr(float(value)) if isinstance(value, float) else str(value)


def dump_metric_rows(rows: Sequence[MetricRow], columns: Sequence[str] = ROW_COLUMNS[:6]) -> str:
    """Write rows as CSV at full precision (``repr`` of each float)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([r.tool if c == "tool" else _cell(getattr(r, c)) for c in columns])
    return buf.getvalue()
