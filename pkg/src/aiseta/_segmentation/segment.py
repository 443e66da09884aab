"""Gap splitting, speed filtering and eligibility of vessel sub-trajectories."""

import datetime as dt
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import partial

from aiseta._ais.message import AisMessage, ShipClass, VesselStream
from aiseta._geo.position import haversine_distance
from aiseta._logger import logger
from aiseta._parallel import map_ordered
from aiseta.config import SegmentationConfig

Segment = tuple[AisMessage, ...]


@dataclass(frozen=True, slots=True)
class TrajectorySummary:
    """Features summarizing a sub-trajectory."""

    displacement: float
    """Great-circle distance from the first to the last message, in kilometers."""

    time_span: float
    """Minutes from the first to the last message."""

    num_messages: int


@dataclass(frozen=True, slots=True)
class SubTrajectory:
    """An eligible, speed-filtered slice of one vessel's message stream."""

    vessel_id: int
    index: int
    """Position of this sub-trajectory within its vessel's stream."""

    ship_class: ShipClass
    messages: Segment
    summary: TrajectorySummary

    @property
    def key(self) -> tuple[int, int]:
        """The (vessel_id, index) pair identifying this sub-trajectory."""
        return (self.vessel_id, self.index)

    @property
    def start_time(self) -> dt.datetime:
        """The UTC time of the first message."""
        return self.messages[0].time

    @property
    def end_time(self) -> dt.datetime:
        """The UTC time of the last message."""
        return self.messages[-1].time


def split_by_gap(messages: Sequence[AisMessage], max_gap: float = 90.0) -> list[Segment]:
    """Split a time-ordered message sequence wherever reporting goes silent.

    A new segment starts at every message whose gap to its predecessor is strictly
    greater than `max_gap`, so the segments concatenate back to the input.

    Args:
        messages: Messages sorted by timestamp.
        max_gap: The largest tolerated gap, in minutes.

    Returns:
        The segments, in order.
    """
    if not messages:
        return []

    limit = max_gap * 60.0
    segments: list[Segment] = []
    start = 0
    for i in range(1, len(messages)):
        if messages[i].timestamp - messages[i - 1].timestamp > limit:
            segments.append(tuple(messages[start:i]))
            start = i

    segments.append(tuple(messages[start:]))
    return segments


def filter_speed(
    segment: Sequence[AisMessage], min_kn: float = 3.0, max_kn: float = 50.0
) -> Segment:
    """Keep messages whose speed over ground lies within [min_kn, max_kn]."""
    return tuple(m for m in segment if min_kn <= m.sog <= max_kn)


def summarize(segment: Sequence[AisMessage]) -> TrajectorySummary:
    """Compute the summary features of a message sequence."""
    if not segment:
        return TrajectorySummary(0.0, 0.0, 0)

    first, last = segment[0], segment[-1]
    return TrajectorySummary(
        displacement=haversine_distance(first.position, last.position),
        time_span=(last.timestamp - first.timestamp) / 60.0,
        num_messages=len(segment),
    )


def check_eligibility(
    segment: Sequence[AisMessage], config: SegmentationConfig | None = None
) -> tuple[bool, TrajectorySummary]:
    """Decide whether a speed-filtered segment is an eligible sub-trajectory.

    Args:
        segment: A speed-filtered message sequence.
        config: The eligibility thresholds, all inclusive.

    Returns:
        The eligibility flag and the segment summary.
    """
    config = config or SegmentationConfig()
    summary = summarize(segment)

    eligible = (
        summary.num_messages >= config.min_messages
        and summary.time_span >= config.min_time_span_minutes
        and summary.displacement >= config.min_displacement_km
    )
    return eligible, summary


def segment_vessel(
    stream: VesselStream, config: SegmentationConfig | None = None
) -> list[SubTrajectory]:
    """Split, filter and check one vessel stream, returning its eligible sub-trajectories."""
    config = config or SegmentationConfig()

    segments: list[Segment] = []
    for raw in split_by_gap(stream.messages, config.max_gap_minutes):
        filtered = filter_speed(raw, config.min_speed_kn, config.max_speed_kn)
        if config.regap_after_filter:
            segments.extend(split_by_gap(filtered, config.max_gap_minutes))
        else:
            segments.append(filtered)

    trajectories: list[SubTrajectory] = []
    for segment in segments:
        eligible, summary = check_eligibility(segment, config)
        if eligible:
            trajectories.append(
                SubTrajectory(
                    vessel_id=stream.vessel_id,
                    index=len(trajectories),
                    ship_class=stream.ship_class,
                    messages=segment,
                    summary=summary,
                )
            )

    return trajectories


def segment_streams(
    streams: Iterable[VesselStream],
    config: SegmentationConfig | None = None,
    *,
    jobs: int = 1,
) -> list[SubTrajectory]:
    """Segment many vessel streams, in ascending vessel order.

    Args:
        streams: The vessel streams.
        config: Segmentation thresholds.
        jobs: Worker processes to use.

    Returns:
        All eligible sub-trajectories, ordered by (vessel_id, index).
    """
    ordered = sorted(streams, key=lambda s: s.vessel_id)
    per_vessel = map_ordered(partial(segment_vessel, config=config), ordered, jobs)

    trajectories = [t for vessel in per_vessel for t in vessel]
    logger.info(
        "Segmented %d vessels into %d eligible sub-trajectories",
        len(ordered),
        len(trajectories),
    )
    return trajectories
