"""Evaluate monolith-to-microservice decompositions.

Quality metrics (SM, IFN, ICP, NED), cross-tool z-score composite scoring,
baseline decomposers and a planted-partition graph generator.
"""

from msdecomp.decomposers import (
    HierarchicalParams,
    HillClimbParams,
    decompose_hierarchical,
    decompose_hillclimb,
    decompose_monolith,
    decompose_random,
    decompose_singletons,
)
from msdecomp.ingestion import (
    dump_decomposition,
    dump_graph,
    load_decomposition,
    load_graph,
    load_metric_rows,
)
from msdecomp.metrics import (
    EdgePolicy,
    MetricReport,
    compute_icp,
    compute_ifn,
    compute_ned,
    compute_sm,
    evaluate_all,
)
from msdecomp.model import (
    CallEdge,
    ClassNode,
    Decomposition,
    EdgeKind,
    MonolithGraph,
    Service,
    ValidatedPartition,
    validate_decomposition,
)
from msdecomp.planted import PlantedSpec, generate_planted
from msdecomp.report import RenderFormat, render_report
from msdecomp.scoring import (
    MetricRow,
    ScoreTable,
    StdConvention,
    WeightVector,
    composite_scores,
    rank_table,
    zscore_columns,
)

__version__ = "0.1.0"

__all__ = [
    "CallEdge",
    "ClassNode",
    "Decomposition",
    "EdgeKind",
    "EdgePolicy",
    "HierarchicalParams",
    "HillClimbParams",
    "MetricReport",
    "MetricRow",
    "MonolithGraph",
    "PlantedSpec",
    "RenderFormat",
    "ScoreTable",
    "Service",
    "StdConvention",
    "ValidatedPartition",
    "WeightVector",
    "composite_scores",
    "compute_icp",
    "compute_ifn",
    "compute_ned",
    "compute_sm",
    "decompose_hierarchical",
    "decompose_hillclimb",
    "decompose_monolith",
    "decompose_random",
    "decompose_singletons",
    "dump_decomposition",
    "dump_graph",
    "evaluate_all",
    "generate_planted",
    "load_decomposition",
    "load_graph",
    "load_metric_rows",
    "rank_table",
    "render_report",
    "validate_decomposition",
    "zscore_columns",
]
