"""Hierarchical speed estimation and travel-time prediction over the knowledge graph."""

from ._estimator.estimate import (
    LookupObserver,
    Prediction,
    QueryContext,
    RouteSegment,
    SegmentPrediction,
    SliceStats,
    SpeedEstimate,
    estimate_speed,
    fallback_estimate,
    lookup_stats,
    predict_segments,
)
from ._estimator.levels import LevelSlice, PriorityLevel
from ._estimator.route import find_route, nearest_node, shortest_path

__all__ = [
    "LevelSlice",
    "LookupObserver",
    "Prediction",
    "PriorityLevel",
    "QueryContext",
    "RouteSegment",
    "SegmentPrediction",
    "SliceStats",
    "SpeedEstimate",
    "estimate_speed",
    "fallback_estimate",
    "find_route",
    "lookup_stats",
    "nearest_node",
    "predict_segments",
    "shortest_path",
]
