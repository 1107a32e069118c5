"""Decomposition quality metrics: SM, IFN, ICP and NED.

Each ``compute_*`` function returns a breakdown carrying every per-service
intermediate so reports can explain a score rather than just state it.
Which call edges feed which metric is controlled by :class:`EdgePolicy`;
the policy travels with every :class:`MetricReport`.

Conventions:

* SM = mean(scoh_i) - sum(scop_ij over unordered pairs) / (M(M-1)/2), with
  scoh_i = mu_i / m_i**2 and scop_ij = gamma_ij / (2 m_i m_j). The coupling
  term is 0 for a single service.
* A class is an interface of its service when at least one call from
  another service targets it.
* ICP is the share of all calls that cross a service boundary. The pairwise
  matrix (each ordered pair's share of inter-service calls) is kept too.
* NED = 1 - (services with lo <= size <= hi) / N, window (5, 20) by default.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field

from msdecomp.errors import InvalidBounds, NoRuntimeData
from msdecomp.model import (
    Decomposition,
    EdgeKind,
    MonolithGraph,
    ValidatedPartition,
    validate_decomposition,
)

NED_BOUNDS = (5, 20)


class SmSource(str, enum.Enum):
    STATIC_DISTINCT = "static_distinct"
    STATIC_WEIGHTED = "static_weighted"
    RUNTIME_WEIGHTED = "runtime_weighted"


class IcpSource(str, enum.Enum):
    RUNTIME_ELSE_STATIC = "runtime_else_static"
    RUNTIME_ONLY = "runtime_only"
    STATIC_ONLY = "static_only"


@dataclass(frozen=True)
class EdgePolicy:
    sm_source: SmSource = SmSource.STATIC_DISTINCT
    icp_source: IcpSource = IcpSource.RUNTIME_ELSE_STATIC
    include_self_edges_in_cohesion: bool = True

    def __post_init__(self):
        object.__setattr__(self, "sm_source", SmSource(self.sm_source))
        object.__setattr__(self, "icp_source", IcpSource(self.icp_source))

    def as_dict(self) -> dict:
        return {
            "sm_source": self.sm_source.value,
            "icp_source": self.icp_source.value,
            "include_self_edges_in_cohesion": self.include_self_edges_in_cohesion,
        }


DEFAULT_POLICY = EdgePolicy()


@dataclass(frozen=True)
class SmBreakdown:
    scoh: tuple[float, ...]
    scop: dict[tuple[int, int], float]
    mu: tuple[int, ...]
    gamma: dict[tuple[int, int], int]
    cohesion: float
    coupling: float
    sm: float


@dataclass(frozen=True)
class IfnBreakdown:
    interfaces: tuple[frozenset[str], ...]
    ifn_per_service: tuple[int, ...]
    ifn: float


@dataclass(frozen=True)
class IcpBreakdown:
    pair_fractions: dict[tuple[int, int], float]
    aggregate: float
    inter_calls: int
    total_calls: int
    source: EdgeKind | None = None


@dataclass(frozen=True)
class NedBreakdown:
    sizes: tuple[int, ...]
    non_extreme_count: int
    bounds: tuple[int, int]
    ned: float


@dataclass(frozen=True)
class MetricReport:
    system: str
    tool: str
    services: tuple[str, ...]
    policy: EdgePolicy
    sm: SmBreakdown
    ifn: IfnBreakdown
    icp: IcpBreakdown
    ned: NedBreakdown
    micro: int = field(default=0)

    def values(self) -> dict[str, float]:
        return {"sm": self.sm.sm, "ifn": self.ifn.ifn, "icp": self.icp.aggregate, "ned": self.ned.ned}


def sm_edge_weights(graph: MonolithGraph, policy: EdgePolicy = DEFAULT_POLICY) -> list[tuple[str, str, int]]:
    """(src, dst, weight) triples that feed SM and IFN under ``policy``."""
    if policy.sm_source is SmSource.RUNTIME_WEIGHTED:
        edges = graph.edges_of(EdgeKind.RUNTIME)
    else:
        edges = graph.edges_of(EdgeKind.STATIC)
    distinct = policy.sm_source is SmSource.STATIC_DISTINCT
    out = []
    for e in edges:
        if e.src == e.dst and not policy.include_self_edges_in_cohesion:
            continue
        out.append((e.src, e.dst, 1 if distinct else e.count))
    return out


def compute_sm(graph: MonolithGraph, partition: ValidatedPartition,
               policy: EdgePolicy = DEFAULT_POLICY) -> SmBreakdown:
    n = partition.n_services
    sizes = partition.sizes
    idx = partition.index
    mu = [0] * n
    gamma: dict[tuple[int, int], int] = defaultdict(int)
    for src, dst, w in sm_edge_weights(graph, policy):
        i, j = idx[src], idx[dst]
        if i == j:
            mu[i] += w
        else:
            gamma[min(i, j), max(i, j)] += w
    scoh = tuple(mu[i] / sizes[i] ** 2 for i in range(n))
    scop = {}
    full_gamma = {}
    for i in range(n):
        for j in range(i + 1, n):
            g = gamma.get((i, j), 0)
            full_gamma[i, j] = g
            scop[i, j] = g / (2 * sizes[i] * sizes[j])
    cohesion = sum(scoh) / n
    # single-service decompositions have no coupling term
    coupling = sum(scop.values()) / (n * (n - 1) / 2) if n > 1 else 0.0
    return SmBreakdown(scoh, scop, tuple(mu), full_gamma, cohesion, coupling, cohesion - coupling)


def compute_ifn(graph: MonolithGraph, partition: ValidatedPartition,
                policy: EdgePolicy = DEFAULT_POLICY) -> IfnBreakdown:
    idx = partition.index
    interfaces: list[set[str]] = [set() for _ in range(partition.n_services)]
    for src, dst, _ in sm_edge_weights(graph, policy):
        if idx[src] != idx[dst]:
            interfaces[idx[dst]].add(dst)
    per = tuple(len(s) for s in interfaces)
    return IfnBreakdown(tuple(frozenset(s) for s in interfaces), per, sum(per) / len(per))


def _icp_edges(graph: MonolithGraph, policy: EdgePolicy):
    src = policy.icp_source
    if src is IcpSource.STATIC_ONLY:
        return EdgeKind.STATIC
    if graph.has_runtime_edges():
        return EdgeKind.RUNTIME
    if src is IcpSource.RUNTIME_ONLY:
        raise NoRuntimeData(f"graph {graph.name!r} has no runtime edges and policy is runtime_only")
    return EdgeKind.STATIC


def compute_icp(graph: MonolithGraph, partition: ValidatedPartition,
                policy: EdgePolicy = DEFAULT_POLICY) -> IcpBreakdown:
    """Inter-service call share, weighted by call counts.

    Raises:
        NoRuntimeData: ``runtime_only`` policy on a graph with no runtime edges.
    """
    kind = _icp_edges(graph, policy)
    idx = partition.index
    pairs: dict[tuple[int, int], int] = defaultdict(int)
    total = 0
    for e in graph.edges_of(kind):
        total += e.count
        i, j = idx[e.src], idx[e.dst]
        if i != j:
            pairs[i, j] += e.count
    inter = sum(pairs.values())
    fractions = {k: pairs[k] / inter for k in sorted(pairs)} if inter else {}
    return IcpBreakdown(fractions, inter / total if total else 0.0, inter, total, kind)


def compute_ned(partition: ValidatedPartition, bounds: tuple[int, int] = NED_BOUNDS) -> NedBreakdown:
    lo, hi = bounds
    if lo < 1 or hi < 1 or lo > hi:
        raise InvalidBounds(f"NED bounds must satisfy 1 <= lo <= hi, got {bounds!r}")
    sizes = partition.sizes
    inside = sum(1 for s in sizes if lo <= s <= hi)
    return NedBreakdown(sizes, inside, (lo, hi), 1 - inside / len(sizes))


def evaluate_all(graph: MonolithGraph, decomposition: Decomposition | ValidatedPartition,
                 policy: EdgePolicy = DEFAULT_POLICY,
                 ned_bounds: tuple[int, int] = NED_BOUNDS) -> MetricReport:
    """Validate ``decomposition`` against ``graph`` and compute all four metrics."""
    part = validate_decomposition(graph, decomposition)
    d = part.decomposition
    return MetricReport(
        system=d.system or graph.name,
        tool=d.tool,
        services=part.names,
        policy=policy,
        sm=compute_sm(graph, part, policy),
        ifn=compute_ifn(graph, part, policy),
        icp=compute_icp(graph, part, policy),
        ned=compute_ned(part, ned_bounds),
        micro=part.n_services,
    )
