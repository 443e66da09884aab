"""Sub-trajectory segmentation of vessel streams.

Each stream is split wherever consecutive messages are more than 90 minutes apart,
messages outside the 3-50 knot band are dropped, and the remaining segments are kept
if they have at least 10 messages, span at least 30 minutes and are displaced at least
100 km end to end.
"""

from ._segmentation.segment import (
    Segment,
    SubTrajectory,
    TrajectorySummary,
    check_eligibility,
    filter_speed,
    segment_streams,
    segment_vessel,
    split_by_gap,
    summarize,
)

__all__ = [
    "Segment",
    "SubTrajectory",
    "TrajectorySummary",
    "check_eligibility",
    "filter_speed",
    "segment_streams",
    "segment_vessel",
    "split_by_gap",
    "summarize",
]
