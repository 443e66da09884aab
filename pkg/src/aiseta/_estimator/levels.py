"""Priority levels of the speed lookup, from most to least specific."""

from dataclasses import dataclass
from enum import Enum

from aiseta._graph.strata import TemporalAxis


@dataclass(frozen=True, slots=True)
class LevelSlice:
    """Which parts of the query context a level matches exactly.

    Unmatched parts are aggregated over. A level without a temporal axis
    aggregates over all time.
    """

    direction: bool
    ship_class: bool
    axis: TemporalAxis | None


class PriorityLevel(Enum):
    """A position in the fixed lookup order.

    Group 1 matches direction, class and one temporal bin. Group 2 aggregates over
    time, then over class too. Group 3 aggregates over directions. Group 4 matches
    a single factor, and finally the whole node.
    """

    L1A = "L1a"
    """Direction, class and hour of day."""

    L1B = "L1b"
    """Direction, class and day of week."""

    L1C = "L1c"
    """Direction, class and month of year."""

    L2A = "L2a"
    """Direction and class, all time."""

    L2B = "L2b"
    """Direction only. Also stands in for the "direction only" level of group 4."""

    L3A = "L3a"
    """Class and hour of day, all directions."""

    L3B = "L3b"
    """Class and day of week, all directions."""

    L3C = "L3c"
    """Class and month of year, all directions."""

    L4A = "L4a"
    """Class only."""

    L4B = "L4b"
    """Hour of day only."""

    L4C = "L4c"
    """Day of week only."""

    L4D = "L4d"
    """Month of year only."""

    L4E = "L4e"
    """Every sample of the node."""

    FALLBACK = "fallback"
    """The configured standard speed of the vessel class."""

    @classmethod
    def lookup_order(cls) -> tuple["PriorityLevel", ...]:
        """Return the data levels in scan order, excluding the fallback."""
        return tuple(level for level in cls if level is not cls.FALLBACK)

    @property
    def slice(self) -> LevelSlice:
        """The stratum slice this level aggregates.

        Raises:
            ValueError: For the fallback level, which reads no data.
        """
        try:
            return _SLICES[self]
        except KeyError:
            raise ValueError("The fallback level has no stratum slice") from None

    @property
    def group(self) -> int:
        """The lookup group (1-4) of the level, 5 for the fallback."""
        return 5 if self is PriorityLevel.FALLBACK else int(self.value[1])


_SLICES = {
    PriorityLevel.L1A: LevelSlice(True, True, TemporalAxis.HOUR),
    PriorityLevel.L1B: LevelSlice(True, True, TemporalAxis.DOW),
    PriorityLevel.L1C: LevelSlice(True, True, TemporalAxis.MONTH),
    PriorityLevel.L2A: LevelSlice(True, True, None),
    PriorityLevel.L2B: LevelSlice(True, False, None),
    PriorityLevel.L3A: LevelSlice(False, True, TemporalAxis.HOUR),
    PriorityLevel.L3B: LevelSlice(False, True, TemporalAxis.DOW),
    PriorityLevel.L3C: LevelSlice(False, True, TemporalAxis.MONTH),
    PriorityLevel.L4A: LevelSlice(False, True, None),
    PriorityLevel.L4B: LevelSlice(False, False, TemporalAxis.HOUR),
    PriorityLevel.L4C: LevelSlice(False, False, TemporalAxis.DOW),
    PriorityLevel.L4D: LevelSlice(False, False, TemporalAxis.MONTH),
    PriorityLevel.L4E: LevelSlice(False, False, None),
}
