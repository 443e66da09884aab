"""Error metrics over segment records."""

import math
from collections import Counter, defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from aiseta import _json
from aiseta._estimator.levels import PriorityLevel
from aiseta._logger import logger
from aiseta.config import EvaluationConfig
from aiseta.errors import EmptyInputError

from .evaluate import SegmentRecord


@dataclass(kw_only=True)
class WithinFraction:
    """Fraction of predictions whose relative error is at most `threshold`."""

    threshold: float
    fraction: float


@dataclass(kw_only=True)
class SegmentMetrics:
    """Segment errors, grouped per trajectory for MAE and RMSE."""

    segments: int
    trajectories: int
    mae_median: float
    mae_mean: float
    rmse_median: float
    rmse_mean: float
    within: list[WithinFraction] = field(default_factory=list)
    coverage: float
    """Fraction of segments estimated from graph data rather than the fallback."""

    reliable_fraction: float


@dataclass(kw_only=True)
class TrajectoryMetrics:
    """Errors of total travel time per trajectory."""

    trajectories: int
    abs_error_median: float
    """Median of |predicted total - actual total|, in minutes."""

    abs_error_mean: float
    relative_error_median: float
    relative_error_mean: float
    within: list[WithinFraction] = field(default_factory=list)
    coverage: float
    """Fraction of trajectories without any fallback segment."""


@dataclass(kw_only=True)
class NodeError:
    """Mean absolute segment error of the test segments in one cell."""

    cell: str
    mean_error: float
    count: int


@dataclass(kw_only=True)
class LevelUsage:
    """How many segments a priority level resolved."""

    level: PriorityLevel
    count: int


@dataclass(kw_only=True)
class MetricsReport:
    """Segment, trajectory and long-trajectory metrics of one evaluation."""

    segment: SegmentMetrics
    trajectory: TrajectoryMetrics
    long_trajectory_km: float
    long_segment: SegmentMetrics | None = None
    long_trajectory: TrajectoryMetrics | None = None
    node_errors: list[NodeError] = field(default_factory=list)
    level_usage: list[LevelUsage] = field(default_factory=list)

    def to_json(self) -> str:
        """Render the report as a single-line JSON record."""
        return _json.render(self)

    def lines(self) -> list[str]:
        """Render the report as aligned text."""
        lines = ["Segment level (MAE and RMSE grouped per trajectory, minutes)"]
        lines.extend(_segment_lines(self.segment))
        lines.append("Trajectory level (absolute error of total travel time, minutes)")
        lines.extend(_trajectory_lines(self.trajectory))

        if self.long_segment and self.long_trajectory:
            lines.append(f"Long trajectories (> {self.long_trajectory_km:g} km), segment level")
            lines.extend(_segment_lines(self.long_segment))
            lines.append(f"Long trajectories (> {self.long_trajectory_km:g} km), trajectory level")
            lines.extend(_trajectory_lines(self.long_trajectory))

        lines.append("Priority level usage")
        for usage in self.level_usage:
            lines.append(f"  {usage.level.value:<10}{usage.count:>10}")

        return lines


def _row(name: str, value: float | int) -> str:
    if isinstance(value, int):
        return f"  {name:<24}{value:>12}"
    return f"  {name:<24}{value:>12.4f}"


def _segment_lines(metrics: SegmentMetrics) -> list[str]:
    return [
        _row("segments", metrics.segments),
        _row("trajectories", metrics.trajectories),
        _row("MAE median", metrics.mae_median),
        _row("MAE mean", metrics.mae_mean),
        _row("RMSE median", metrics.rmse_median),
        _row("RMSE mean", metrics.rmse_mean),
        *(_row(f"within {w.threshold:.0%}", w.fraction) for w in metrics.within),
        _row("coverage", metrics.coverage),
        _row("reliable", metrics.reliable_fraction),
    ]


def _trajectory_lines(metrics: TrajectoryMetrics) -> list[str]:
    return [
        _row("trajectories", metrics.trajectories),
        _row("abs error median", metrics.abs_error_median),
        _row("abs error mean", metrics.abs_error_mean),
        _row("relative error median", metrics.relative_error_median),
        _row("relative error mean", metrics.relative_error_mean),
        *(_row(f"within {w.threshold:.0%}", w.fraction) for w in metrics.within),
        _row("coverage", metrics.coverage),
    ]


def _within(relative: Sequence[float], thresholds: Sequence[float]) -> list[WithinFraction]:
    values = np.asarray(relative, dtype=np.float64)
    return [
        WithinFraction(threshold=p, fraction=float(np.mean(values <= p)))
        for p in sorted(thresholds)
    ]


def _group(records: Iterable[SegmentRecord]) -> dict[tuple[int, int], list[SegmentRecord]]:
    groups: dict[tuple[int, int], list[SegmentRecord]] = defaultdict(list)
    for record in sorted(
        records, key=lambda r: (r.vessel_id, r.trajectory_index, r.segment_index)
    ):
        groups[record.trajectory_key].append(record)
    return groups


def segment_metrics(
    groups: dict[tuple[int, int], list[SegmentRecord]], thresholds: Sequence[float]
) -> SegmentMetrics:
    """Compute segment-level metrics of trajectory-grouped records."""
    mae: list[float] = []
    rmse: list[float] = []
    for segments in groups.values():
        errors = np.array([r.error for r in segments])
        mae.append(float(np.mean(np.abs(errors))))
        rmse.append(math.sqrt(float(np.mean(errors**2))))

    flat = [r for segments in groups.values() for r in segments]
    return SegmentMetrics(
        segments=len(flat),
        trajectories=len(groups),
        mae_median=float(np.median(mae)),
        mae_mean=float(np.mean(mae)),
        rmse_median=float(np.median(rmse)),
        rmse_mean=float(np.mean(rmse)),
        within=_within([abs(r.error) / r.actual_time for r in flat], thresholds),
        coverage=sum(1 for r in flat if not r.used_fallback) / len(flat),
        reliable_fraction=sum(1 for r in flat if r.reliable) / len(flat),
    )


def trajectory_metrics(
    groups: dict[tuple[int, int], list[SegmentRecord]], thresholds: Sequence[float]
) -> TrajectoryMetrics:
    """Compute trajectory-level metrics of trajectory-grouped records."""
    absolute: list[float] = []
    relative: list[float] = []
    covered = 0
    for segments in groups.values():
        actual = math.fsum(r.actual_time for r in segments)
        predicted = math.fsum(r.predicted_time for r in segments)
        absolute.append(abs(predicted - actual))
        relative.append(abs(predicted - actual) / actual)
        covered += not any(r.used_fallback for r in segments)

    return TrajectoryMetrics(
        trajectories=len(groups),
        abs_error_median=float(np.median(absolute)),
        abs_error_mean=float(np.mean(absolute)),
        relative_error_median=float(np.median(relative)),
        relative_error_mean=float(np.mean(relative)),
        within=_within(relative, thresholds),
        coverage=covered / len(groups),
    )


def node_errors(records: Iterable[SegmentRecord]) -> list[NodeError]:
    """Return the mean absolute error of each cell traversed by the records, by cell."""
    errors: dict[str, list[float]] = defaultdict(list)
    for record in records:
        errors[record.cell].append(abs(record.error))

    return [
        NodeError(cell=cell, mean_error=math.fsum(values) / len(values), count=len(values))
        for cell, values in sorted(errors.items())
    ]


def compute_metrics(
    records: Iterable[SegmentRecord], config: EvaluationConfig | None = None
) -> MetricsReport:
    """Summarize segment records into a metrics report.

    Segment MAE and RMSE are computed per trajectory, then summarized by their
    median and mean across trajectories. Trajectory errors compare total predicted
    and actual travel time. The long slice keeps trajectories whose displacement
    exceeds the configured cut.

    Raises:
        EmptyInputError: If there are no records.
    """
    config = config or EvaluationConfig()
    groups = _group(records)
    if not groups:
        raise EmptyInputError("No segment records to evaluate")

    thresholds = config.within_fractions
    long_groups = {
        key: segments
        for key, segments in groups.items()
        if segments[0].trajectory_displacement > config.long_trajectory_km
    }

    flat = [r for segments in groups.values() for r in segments]
    usage = Counter(r.level for r in flat)

    report = MetricsReport(
        segment=segment_metrics(groups, thresholds),
        trajectory=trajectory_metrics(groups, thresholds),
        long_trajectory_km=config.long_trajectory_km,
        long_segment=segment_metrics(long_groups, thresholds) if long_groups else None,
        long_trajectory=trajectory_metrics(long_groups, thresholds) if long_groups else None,
        node_errors=node_errors(flat),
        level_usage=[
            LevelUsage(level=level, count=usage[level]) for level in PriorityLevel if usage[level]
        ],
    )

    logger.info(
        "Segment RMSE median %.2f min over %d trajectories, coverage %.4f",
        report.segment.rmse_median,
        report.segment.trajectories,
        report.segment.coverage,
    )
    return report
