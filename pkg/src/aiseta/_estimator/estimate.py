"""Priority-based speed estimation and travel-time prediction."""

import datetime as dt
from collections.abc import Callable, Sequence
from dataclasses import dataclass

from aiseta._ais.message import ShipClass
from aiseta._geo.direction import CompassDirection
from aiseta._geo.position import travel_minutes
from aiseta._graph.accumulator import SpeedAccumulator
from aiseta._graph.graph import KnowledgeGraph
from aiseta._graph.strata import TemporalAxis, TemporalBins
from aiseta._logger import logger
from aiseta.config import CountBasis, EstimatorConfig
from aiseta.errors import UnknownCellError

from .levels import PriorityLevel


@dataclass(frozen=True, slots=True)
class QueryContext:
    """The vessel class, instant and direction a speed is estimated for."""

    ship_class: ShipClass
    timestamp: float
    """UTC epoch seconds."""

    direction: CompassDirection | None
    """Direction of travel. Without one, direction-keyed levels find nothing."""

    @classmethod
    def at(
        cls, ship_class: ShipClass, time: dt.datetime, direction: CompassDirection | None
    ) -> "QueryContext":
        """Create a context from an aware datetime."""
        return cls(ship_class, time.timestamp(), direction)

    @property
    def bins(self) -> TemporalBins:
        """The temporal bins of the query instant."""
        return TemporalBins.from_timestamp(self.timestamp)


@dataclass(frozen=True, slots=True)
class SliceStats:
    """Aggregated statistics of the strata a level selects."""

    mean: float
    sample_count: int
    run_count: int


@dataclass(frozen=True, slots=True)
class SpeedEstimate:
    """A speed and the lookup level that produced it."""

    speed: float
    """Knots."""

    level: PriorityLevel
    sample_count: int
    """Samples backing the estimate, 0 for the fallback."""

    run_count: int
    reliable: bool

    @property
    def used_fallback(self) -> bool:
        """Whether no historical data backs the estimate."""
        return self.level is PriorityLevel.FALLBACK


LookupObserver = Callable[[PriorityLevel, SliceStats | None], None]
"""Called with every level consulted and what it found."""


def lookup_stats(
    graph: KnowledgeGraph, cell: str, level: PriorityLevel, ctx: QueryContext
) -> SliceStats | None:
    """Aggregate the strata of a node that one priority level selects.

    Accumulators on the slice are summed, so the mean is count-weighted.

    Args:
        graph: The knowledge graph.
        cell: The node to read.
        level: The priority level defining the slice.
        ctx: The query context.

    Returns:
        The slice statistics, or None when no accumulator exists on the slice.

    Raises:
        UnknownCellError: If the cell is not a node of the graph.
    """
    node = graph.node(cell)
    selection = level.slice
    if selection.direction and ctx.direction is None:
        return None

    # All-time slices read the hour table, every sample lands there exactly once
    axis = selection.axis or TemporalAxis.HOUR
    wanted_bin = ctx.bins.value(selection.axis) if selection.axis else None

    total = SpeedAccumulator()
    for (ship_class, direction, value), acc in node.strata.sorted_items(axis):
        if selection.direction and direction is not ctx.direction:
            continue
        if selection.ship_class and ship_class is not ctx.ship_class:
            continue
        if wanted_bin is not None and value != wanted_bin:
            continue
        total.merge(acc)

    if not total.count:
        return None

    return SliceStats(total.mean, total.count, total.runs)


def fallback_estimate(ship_class: ShipClass, config: EstimatorConfig | None = None) -> SpeedEstimate:
    """Return the standard class speed, used where a cell has no history."""
    config = config or EstimatorConfig()
    return SpeedEstimate(
        speed=config.fallback.for_class(ship_class),
        level=PriorityLevel.FALLBACK,
        sample_count=0,
        run_count=0,
        reliable=False,
    )


def estimate_speed(
    graph: KnowledgeGraph,
    cell: str,
    ctx: QueryContext,
    config: EstimatorConfig | None = None,
    *,
    on_lookup: LookupObserver | None = None,
) -> SpeedEstimate:
    """Estimate the speed of a vessel through a cell.

    Levels are scanned from most to least specific. The first level backed by at
    least `reliability_threshold` observations wins and is reliable. Failing that,
    the most specific level with any data wins, unreliable. A cell without any data
    gets the class fallback speed, so estimation never fails.

    Args:
        graph: The knowledge graph.
        cell: The geohash cell.
        ctx: The query context.
        config: Threshold, count basis, fallback speeds and enabled levels.
        on_lookup: Observer of every level consulted, in order.

    Returns:
        The speed estimate.
    """
    config = config or EstimatorConfig()
    if cell not in graph:
        return fallback_estimate(ctx.ship_class, config)

    best: tuple[PriorityLevel, SliceStats] | None = None
    for level in config.enabled_levels():
        stats = lookup_stats(graph, cell, level, ctx)
        if on_lookup is not None:
            on_lookup(level, stats)
        if stats is None:
            continue

        observations = (
            stats.run_count if config.count_basis is CountBasis.RUNS else stats.sample_count
        )
        if observations >= config.reliability_threshold:
            return SpeedEstimate(stats.mean, level, stats.sample_count, stats.run_count, True)

        if best is None:
            best = (level, stats)

    if best is not None:
        level, stats = best
        return SpeedEstimate(stats.mean, level, stats.sample_count, stats.run_count, False)

    return fallback_estimate(ctx.ship_class, config)


@dataclass(frozen=True, slots=True)
class RouteSegment:
    """A stretch of travel attributed to one cell."""

    cell: str
    distance: float
    """Kilometers."""

    direction: CompassDirection | None
    entry_timestamp: float | None = None
    """Observed entry time when replaying a trajectory, None to use the predicted clock."""


@dataclass(frozen=True, slots=True)
class SegmentPrediction:
    """The predicted travel time of one segment."""

    cell: str
    distance: float
    estimate: SpeedEstimate
    predicted_time: float
    """Minutes."""

    timestamp: float
    """The instant the estimate was taken for."""


@dataclass(frozen=True)
class Prediction:
    """Per-segment predictions and the resulting travel time."""

    segments: tuple[SegmentPrediction, ...]
    departure: float
    replay: bool
    """True when observed entry times, rather than the predicted clock, set the context."""

    @property
    def total_minutes(self) -> float:
        """Predicted travel time over all segments."""
        return sum(s.predicted_time for s in self.segments)

    @property
    def distance(self) -> float:
        """Kilometers over all segments."""
        return sum(s.distance for s in self.segments)

    @property
    def arrival(self) -> dt.datetime:
        """The predicted UTC arrival time."""
        return dt.datetime.fromtimestamp(
            self.departure + self.total_minutes * 60.0, dt.timezone.utc
        )


def predict_segments(
    graph: KnowledgeGraph,
    segments: Sequence[RouteSegment],
    ship_class: ShipClass,
    departure: float,
    config: EstimatorConfig | None = None,
    *,
    strict: bool = False,
    on_lookup: LookupObserver | None = None,
) -> Prediction:
    """Predict the travel time of a sequence of segments.

    Each segment is estimated for its observed entry time if it has one, otherwise
    for the predicted clock: departure plus the time predicted so far.

    Args:
        graph: The knowledge graph.
        segments: The segments, in travel order.
        ship_class: The vessel class.
        departure: UTC epoch seconds of departure.
        config: Estimator settings.
        strict: Reject cells that are not in the graph instead of using the fallback.
        on_lookup: Observer of every level consulted.

    Returns:
        The prediction.

    Raises:
        UnknownCellError: In strict mode, if a segment's cell is not in the graph.
        ValueError: If a segment has a negative distance.
    """
    config = config or EstimatorConfig()

    clock = departure
    predictions: list[SegmentPrediction] = []
    for segment in segments:
        if segment.distance < 0:
            raise ValueError(f"Negative segment distance {segment.distance}")

        if segment.cell not in graph:
            if strict:
                raise UnknownCellError(f"Cell {segment.cell!r} is not in the graph")
            logger.warning("Cell %s is not in the graph, using the fallback speed", segment.cell)

        timestamp = segment.entry_timestamp if segment.entry_timestamp is not None else clock
        ctx = QueryContext(ship_class, timestamp, segment.direction)
        estimate = estimate_speed(graph, segment.cell, ctx, config, on_lookup=on_lookup)

        minutes = travel_minutes(segment.distance, estimate.speed)
        predictions.append(
            SegmentPrediction(segment.cell, segment.distance, estimate, minutes, timestamp)
        )
        clock += minutes * 60.0

    return Prediction(
        segments=tuple(predictions),
        departure=departure,
        replay=any(s.entry_timestamp is not None for s in segments),
    )
