"""Per-vessel reporting-behaviour features."""

import math
from collections import defaultdict
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from aiseta._segmentation.segment import SubTrajectory, TrajectorySummary

# Summaries are positive for eligible trajectories, this only guards zero thresholds
_LOG_FLOOR = 1e-9


@dataclass(frozen=True, slots=True)
class VesselFeatures:
    """Log10 mean displacement, time span and message count of a vessel."""

    vessel_id: int
    x: tuple[float, float, float]


def summary_vector(summary: TrajectorySummary) -> tuple[float, float, float]:
    """Return the log10 feature vector of a single summary."""
    return (
        math.log10(max(summary.displacement, _LOG_FLOOR)),
        math.log10(max(summary.time_span, _LOG_FLOOR)),
        math.log10(max(float(summary.num_messages), _LOG_FLOOR)),
    )


def build_features(trajectories: Iterable[SubTrajectory]) -> list[VesselFeatures]:
    """Average each vessel's sub-trajectory summaries and log10-transform them.

    Args:
        trajectories: Eligible sub-trajectories of any number of vessels.

    Returns:
        One feature vector per vessel, in ascending vessel order.
    """
    sums: dict[int, list[float]] = defaultdict(lambda: [0.0, 0.0, 0.0, 0.0])
    for t in trajectories:
        acc = sums[t.vessel_id]
        acc[0] += t.summary.displacement
        acc[1] += t.summary.time_span
        acc[2] += t.summary.num_messages
        acc[3] += 1

    features: list[VesselFeatures] = []
    for vessel_id in sorted(sums):
        displacement, time_span, num_messages, count = sums[vessel_id]
        features.append(
            VesselFeatures(
                vessel_id,
                (
                    math.log10(max(displacement / count, _LOG_FLOOR)),
                    math.log10(max(time_span / count, _LOG_FLOOR)),
                    math.log10(max(num_messages / count, _LOG_FLOOR)),
                ),
            )
        )

    return features


def feature_matrix(features: Iterable[VesselFeatures]) -> npt.NDArray[np.float64]:
    """Stack feature vectors into an (n, 3) array."""
    return np.array([f.x for f in features], dtype=np.float64).reshape(-1, 3)
