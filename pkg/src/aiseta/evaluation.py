"""Chronological splitting, segment replay, error metrics and per-cell error export."""

from ._evaluation.evaluate import (
    SegmentRecord,
    check_leakage,
    evaluate_segments,
    evaluate_trajectory,
)
from ._evaluation.export import export_node_errors, node_error_features
from ._evaluation.metrics import (
    LevelUsage,
    MetricsReport,
    NodeError,
    SegmentMetrics,
    TrajectoryMetrics,
    WithinFraction,
    compute_metrics,
    node_errors,
    segment_metrics,
    trajectory_metrics,
)
from ._evaluation.split import is_held_out, temporal_split

__all__ = [
    "LevelUsage",
    "MetricsReport",
    "NodeError",
    "SegmentMetrics",
    "SegmentRecord",
    "TrajectoryMetrics",
    "WithinFraction",
    "check_leakage",
    "compute_metrics",
    "evaluate_segments",
    "evaluate_trajectory",
    "export_node_errors",
    "is_held_out",
    "node_error_features",
    "node_errors",
    "segment_metrics",
    "temporal_split",
    "trajectory_metrics",
]
