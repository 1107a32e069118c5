"""Synthetic monoliths with a known (planted) service partition."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from msdecomp.errors import BadSpec
from msdecomp.model import CallEdge, ClassNode, Decomposition, EdgeKind, MonolithGraph, Service


@dataclass(frozen=True)
class PlantedSpec:
    services: int
    size_range: tuple[int, int]
    p_intra: float
    p_inter: float
    runtime_count_range: tuple[int, int] | None = None
    seed: int = 0
    name: str = "planted"

    def check(self) -> None:
        lo, hi = self.size_range
        if self.services < 1:
            raise BadSpec(f"services must be >= 1, got {self.services}")
        if not 1 <= lo <= hi:
            raise BadSpec(f"size_range must satisfy 1 <= min <= max, got {self.size_range}")
        if not 0.0 <= self.p_inter <= self.p_intra <= 1.0:
            raise BadSpec(f"need 0 <= p_inter <= p_intra <= 1, got p_intra={self.p_intra}, p_inter={self.p_inter}")
        if self.runtime_count_range is not None:
            rlo, rhi = self.runtime_count_range
            if not 1 <= rlo <= rhi:
                raise BadSpec(f"runtime_count_range must satisfy 1 <= min <= max, got {self.runtime_count_range}")
        if not 0 <= self.seed < 2**64:
            raise BadSpec("seed must be a 64-bit unsigned integer")


def generate_planted(spec: PlantedSpec) -> tuple[MonolithGraph, Decomposition]:
    """Sample a graph and its ground-truth decomposition.

    Every ordered pair of distinct classes gets a static edge with
    probability ``p_intra`` (same block) or ``p_inter`` (different blocks).
    With ``runtime_count_range`` set, each static edge also gets a runtime
    edge whose count is uniform on that range.
    """
    spec.check()
    rng = np.random.default_rng(spec.seed)
    lo, hi = spec.size_range
    sizes = rng.integers(lo, hi + 1, size=spec.services)
    width = len(str(int(sizes.max()) - 1))
    blocks: list[list[str]] = []
    for b, size in enumerate(sizes):
        blocks.append([f"svc{b}.C{i:0{width}d}" for i in range(size)])
    ids = [c for block in blocks for c in block]
    label = np.repeat(np.arange(spec.services), sizes)
    n = len(ids)
    prob = np.where(label[:, None] == label[None, :], spec.p_intra, spec.p_inter)
    hit = rng.random((n, n)) < prob
    np.fill_diagonal(hit, False)
    src, dst = np.nonzero(hit)
    edges = [CallEdge(ids[s], ids[d]) for s, d in zip(src, dst)]
    if spec.runtime_count_range is not None:
        rlo, rhi = spec.runtime_count_range
        counts = rng.integers(rlo, rhi + 1, size=len(edges))
        edges += [CallEdge(e.src, e.dst, EdgeKind.RUNTIME, int(c)) for e, c in zip(edges, counts)]
    graph = MonolithGraph(spec.name, tuple(ClassNode(c) for c in ids), tuple(edges))
    truth = Decomposition(
        "planted",
        spec.name,
        tuple(Service(f"svc{b}", frozenset(block)) for b, block in enumerate(blocks)),
    )
    return graph, truth
