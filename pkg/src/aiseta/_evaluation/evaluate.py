"""Segment-level replay of test sub-trajectories against a graph."""

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import partial

from aiseta._estimator.estimate import RouteSegment, predict_segments
from aiseta._estimator.levels import PriorityLevel
from aiseta._graph.build import extract_cell_runs, run_directions
from aiseta._graph.graph import KnowledgeGraph
from aiseta._logger import logger
from aiseta._parallel import map_ordered
from aiseta._segmentation.segment import SubTrajectory
from aiseta._transmitters.select import TransmitterLabel
from aiseta.config import EstimatorConfig
from aiseta.errors import LeakageError

from .split import is_held_out


@dataclass(frozen=True, kw_only=True)
class SegmentRecord:
    """The observed and predicted time of one cell run of a test sub-trajectory."""

    vessel_id: int
    trajectory_index: int
    segment_index: int
    cell: str
    actual_time: float
    """Minutes from entering to leaving the cell."""

    predicted_time: float
    distance: float
    """Observed path length within the cell, in kilometers."""

    level: PriorityLevel
    reliable: bool
    used_fallback: bool
    trajectory_displacement: float
    """Displacement of the whole sub-trajectory, in kilometers."""

    @property
    def trajectory_key(self) -> tuple[int, int]:
        """The (vessel_id, trajectory_index) pair of the sub-trajectory."""
        return (self.vessel_id, self.trajectory_index)

    @property
    def error(self) -> float:
        """Predicted minus actual time, in minutes."""
        return self.predicted_time - self.actual_time


def evaluate_trajectory(
    trajectory: SubTrajectory,
    *,
    graph: KnowledgeGraph,
    config: EstimatorConfig | None = None,
) -> list[SegmentRecord]:
    """Replay one sub-trajectory through the estimator.

    Every run except the last is a segment, timed from its first to its last
    message and estimated at its observed entry time. Runs of a single message
    take no time and are skipped.
    """
    runs = extract_cell_runs(trajectory, graph.precision)
    directions = run_directions(runs)

    timed = [
        (run, direction)
        for run, direction in zip(runs[:-1], directions[:-1])
        if run.exit_timestamp > run.entry_timestamp
    ]
    if not timed:
        return []

    segments = [
        RouteSegment(run.cell, run.path_length, direction, run.entry_timestamp)
        for run, direction in timed
    ]
    prediction = predict_segments(
        graph, segments, trajectory.ship_class, timed[0][0].entry_timestamp, config
    )

    records: list[SegmentRecord] = []
    durations = [run.duration for run, _ in timed]
    for i, (predicted, actual) in enumerate(zip(prediction.segments, durations)):
        records.append(
            SegmentRecord(
                vessel_id=trajectory.vessel_id,
                trajectory_index=trajectory.index,
                segment_index=i,
                cell=predicted.cell,
                actual_time=actual,
                predicted_time=predicted.predicted_time,
                distance=predicted.distance,
                level=predicted.estimate.level,
                reliable=predicted.estimate.reliable,
                used_fallback=predicted.estimate.used_fallback,
                trajectory_displacement=trajectory.summary.displacement,
            )
        )

    return records


def evaluate_segments(
    graph: KnowledgeGraph,
    trajectories: Iterable[SubTrajectory],
    config: EstimatorConfig | None = None,
    *,
    labels: Mapping[int, TransmitterLabel] | None = None,
    jobs: int = 1,
) -> list[SegmentRecord]:
    """Replay test sub-trajectories and record every segment's actual and predicted time.

    Args:
        graph: A graph built from training data only.
        trajectories: The test sub-trajectories.
        config: Estimator settings.
        labels: Transmitter labels. When given, only primary transmitters are evaluated.
        jobs: Worker processes to use.

    Returns:
        The segment records, ordered by (vessel_id, trajectory_index, segment_index).
    """
    selected = sorted(
        (
            t
            for t in trajectories
            if labels is None or (t.vessel_id in labels and labels[t.vessel_id].is_primary)
        ),
        key=lambda t: t.key,
    )

    per_trajectory = map_ordered(
        partial(evaluate_trajectory, graph=graph, config=config), selected, jobs
    )
    records = [record for trajectory in per_trajectory for record in trajectory]

    fallbacks = sum(1 for r in records if r.used_fallback)
    if fallbacks:
        logger.warning("%d of %d segments used the fallback speed", fallbacks, len(records))

    logger.info("Evaluated %d sub-trajectories, %d segments", len(selected), len(records))
    return records


def check_leakage(
    graph: KnowledgeGraph, test: Iterable[SubTrajectory], held_out_days: int
) -> None:
    """Verify a graph holds no data from the test period of a chronological split.

    The graph must have been built against the same held-out window, which rejects
    held-out trajectories at build time, and every test trajectory must start
    inside that window.

    Raises:
        LeakageError: If the graph or the test set breaks the split.
    """
    recorded = graph.metadata.held_out_days
    if recorded != held_out_days:
        raise LeakageError(
            f"The graph was built with held-out window {recorded}, "
            f"but the split holds out {held_out_days} days"
        )

    for trajectory in test:
        if not is_held_out(trajectory.messages[0].timestamp, held_out_days):
            raise LeakageError(
                f"Test sub-trajectory {trajectory.key} starts in the training period"
            )
