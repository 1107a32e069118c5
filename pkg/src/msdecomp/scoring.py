"""Cross-tool z-score standardisation and weighted composite scores.

For one benchmark, every metric column is standardised over the scored
tools, then combined as ``sum(w_m * z_m) / sum(|w_m|)``. The default weights
(3, -1, -1, -1) reward SM and penalise IFN, ICP and NED.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from msdecomp.errors import TooFewRows

METRICS = ("sm", "ifn", "icp", "ned")


class StdConvention(str, enum.Enum):
    POPULATION = "population"
    SAMPLE = "sample"

    @property
    def ddof(self) -> int:
        return 0 if self is StdConvention.POPULATION else 1


@dataclass(frozen=True)
class MetricRow:
    """Raw metric values of one tool on one benchmark.

    ``score`` and ``rank`` are informational (e.g. a published score carried
    along from a results table) and never enter the computation.
    """

    tool: str
    sm: float | None
    ifn: float | None
    icp: float | None
    ned: float | None
    micro: int | None = None
    score: float | None = None
    rank: int | None = None

    @property
    def is_complete(self) -> bool:
        return all(getattr(self, m) is not None for m in METRICS)

    def vector(self) -> tuple[float, float, float, float]:
        return (self.sm, self.ifn, self.icp, self.ned)


@dataclass(frozen=True)
class WeightVector:
    sm: float = 3.0
    ifn: float = -1.0
    icp: float = -1.0
    ned: float = -1.0

    def __post_init__(self):
        if not sum(abs(w) for w in self.as_array()) > 0:
            raise ValueError("at least one weight must be non-zero")

    def as_array(self) -> np.ndarray:
        return np.array([self.sm, self.ifn, self.icp, self.ned], dtype=float)

    @classmethod
    def parse(cls, text: str) -> WeightVector:
        parts = [float(p) for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected four comma-separated weights, got {text!r}")
        return cls(*parts)


@dataclass(frozen=True)
class RankedTool:
    tool: str
    score: float
    rank: int


@dataclass(frozen=True)
class ScoreTable:
    benchmark: str
    convention: StdConvention
    weights: WeightVector
    rows: tuple[MetricRow, ...]
    means: np.ndarray
    stds: np.ndarray
    z: np.ndarray
    scores: np.ndarray
    unscored: tuple[MetricRow, ...] = field(default=())

    def score_of(self, tool: str) -> float:
        for row, s in zip(self.rows, self.scores):
            if row.tool == tool:
                return float(s)
        raise KeyError(tool)

    def ranking(self) -> list[RankedTool]:
        return rank_table(self)


def _matrix(rows: Sequence[MetricRow]) -> np.ndarray:
    return np.array([r.vector() for r in rows], dtype=float).reshape(len(rows), len(METRICS))


def _standardise(x: np.ndarray, convention: StdConvention):
    if x.shape[0] < 2:
        raise TooFewRows(f"standardisation needs at least 2 complete rows, got {x.shape[0]}")
    mean = x.mean(axis=0)
    std = x.std(axis=0, ddof=convention.ddof)
    centred = x - mean
    z = np.zeros_like(x)
    for m in range(x.shape[1]):
        # rounding noise on a constant column counts as zero spread
        if std[m] > 1e-12 * np.abs(x[:, m]).max():
            z[:, m] = centred[:, m] / std[m]
    return mean, std, z


def zscore_columns(rows: Sequence[MetricRow],
                   convention: StdConvention = StdConvention.POPULATION) -> np.ndarray:
    """Per-metric z-scores, shape ``(len(rows), 4)`` in SM, IFN, ICP, NED order.

    Raises:
        TooFewRows: fewer than two rows.
    """
    _, _, z = _standardise(_matrix(rows), StdConvention(convention))
    return z


def composite_scores(rows: Sequence[MetricRow], weights: WeightVector | None = None,
                     convention: StdConvention = StdConvention.POPULATION,
                     benchmark: str = "") -> ScoreTable:
    """Score every complete row; incomplete rows are set aside as unscored."""
    weights = weights or WeightVector()
    convention = StdConvention(convention)
    scored = tuple(r for r in rows if r.is_complete)
    unscored = tuple(r for r in rows if not r.is_complete)
    mean, std, z = _standardise(_matrix(scored), convention)
    w = weights.as_array()
    scores = z @ w / np.abs(w).sum()
    return ScoreTable(benchmark, convention, weights, scored, mean, std, z, scores, unscored)


def rank_table(table: ScoreTable) -> list[RankedTool]:
    """Rows ordered by descending score; ties go to the lexicographically smaller tool name.

    Ranks are positions 1..n, so tied tools still get distinct ranks.
    """
    order = sorted(zip(table.rows, table.scores), key=lambda rs: (-float(rs[1]), rs[0].tool))
    return [RankedTool(row.tool, float(s), i + 1) for i, (row, s) in enumerate(order)]
