"""Chronological train/test split."""

import calendar
import datetime as dt
from collections.abc import Iterable

from aiseta._logger import logger
from aiseta._segmentation.segment import SubTrajectory
from aiseta.config import SplitConfig


def is_held_out(timestamp: float, held_out_days: int = 7) -> bool:
    """Check whether an instant falls within the last `held_out_days` days of its month.

    Calendar days are taken in UTC.
    """
    date = dt.datetime.fromtimestamp(timestamp, dt.timezone.utc).date()
    _, days_in_month = calendar.monthrange(date.year, date.month)
    return date.day > days_in_month - held_out_days


def temporal_split(
    trajectories: Iterable[SubTrajectory], config: SplitConfig | None = None
) -> tuple[list[SubTrajectory], list[SubTrajectory]]:
    """Split sub-trajectories into training and test sets by their start time.

    A sub-trajectory is held out for testing iff its first message lies within the
    last N calendar days of its month. Trajectories that straddle the boundary are
    kept whole on the side they start.

    Returns:
        The (train, test) lists, each in input order.
    """
    config = config or SplitConfig()

    train: list[SubTrajectory] = []
    test: list[SubTrajectory] = []
    for trajectory in trajectories:
        if is_held_out(trajectory.messages[0].timestamp, config.held_out_days):
            test.append(trajectory)
        else:
            train.append(trajectory)

    logger.info("Split into %d training and %d test sub-trajectories", len(train), len(test))
    return train, test
