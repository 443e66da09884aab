"""Stratified speed tables keyed by vessel class, direction and a temporal bin."""

import datetime as dt
from collections.abc import Iterator
from dataclasses import dataclass, field
from enum import Enum

from aiseta._ais.message import ShipClass
from aiseta._geo.direction import CompassDirection

from .accumulator import SpeedAccumulator


class TemporalAxis(Enum):
    """A temporal stratification axis. Each axis is stored as its own table."""

    HOUR = "hour"
    """Hour of day, 0-23 UTC."""

    DOW = "dow"
    """Day of week, Monday = 0."""

    MONTH = "month"
    """Month of year, 1-12."""

    @property
    def bins(self) -> range:
        """The valid bin values of the axis."""
        return _BINS[self]


_BINS = {
    TemporalAxis.HOUR: range(24),
    TemporalAxis.DOW: range(7),
    TemporalAxis.MONTH: range(1, 13),
}


@dataclass(frozen=True, slots=True)
class TemporalBins:
    """The bin of an instant on every temporal axis."""

    hour: int
    dow: int
    month: int

    @classmethod
    def from_timestamp(cls, timestamp: float) -> "TemporalBins":
        """Bin a UTC epoch timestamp."""
        time = dt.datetime.fromtimestamp(timestamp, dt.timezone.utc)
        return cls(time.hour, time.weekday(), time.month)

    def value(self, axis: TemporalAxis) -> int:
        """Return the bin on one axis."""
        if axis is TemporalAxis.HOUR:
            return self.hour
        if axis is TemporalAxis.DOW:
            return self.dow
        return self.month


@dataclass(frozen=True, slots=True)
class StratumKey:
    """One stratum: vessel class, direction and a bin on exactly one temporal axis."""

    ship_class: ShipClass
    direction: CompassDirection
    axis: TemporalAxis
    bin: int

    def __post_init__(self) -> None:
        """Check the bin is valid for its axis."""
        if self.bin not in self.axis.bins:
            raise ValueError(f"Bin {self.bin} outside the {self.axis.value} axis")


TableKey = tuple[ShipClass, CompassDirection, int]
"""(ship_class, direction, bin) key within one axis table."""


@dataclass(slots=True)
class StratumTables:
    """Three parallel tables, one per temporal axis, created lazily.

    Every recorded sample lands in exactly one bin of each axis, so for any
    (class, direction) the three tables hold the same total count.
    """

    hour: dict[TableKey, SpeedAccumulator] = field(default_factory=dict)
    dow: dict[TableKey, SpeedAccumulator] = field(default_factory=dict)
    month: dict[TableKey, SpeedAccumulator] = field(default_factory=dict)

    def table(self, axis: TemporalAxis) -> dict[TableKey, SpeedAccumulator]:
        """Return the table of one axis."""
        if axis is TemporalAxis.HOUR:
            return self.hour
        if axis is TemporalAxis.DOW:
            return self.dow
        return self.month

    def record(
        self,
        ship_class: ShipClass,
        direction: CompassDirection,
        bins: TemporalBins,
        run: SpeedAccumulator,
    ) -> None:
        """Add one run's statistics to its stratum on every axis."""
        for axis in TemporalAxis:
            key = (ship_class, direction, bins.value(axis))
            table = self.table(axis)
            if key in table:
                table[key].merge(run)
            else:
                table[key] = run.copy()

    def merge(self, other: "StratumTables") -> None:
        """Merge another set of tables into this one in place."""
        for axis in TemporalAxis:
            table = self.table(axis)
            for key, acc in other.table(axis).items():
                if key in table:
                    table[key].merge(acc)
                else:
                    table[key] = acc.copy()

    def copy(self) -> "StratumTables":
        """Return an independent deep copy."""
        return StratumTables(
            {k: v.copy() for k, v in self.hour.items()},
            {k: v.copy() for k, v in self.dow.items()},
            {k: v.copy() for k, v in self.month.items()},
        )

    def sorted_items(self, axis: TemporalAxis) -> list[tuple[TableKey, SpeedAccumulator]]:
        """Return the entries of one axis table in a deterministic order."""
        table = self.table(axis)
        return [(key, table[key]) for key in sorted(table, key=_sort_key)]

    def entries(self) -> Iterator[tuple[StratumKey, SpeedAccumulator]]:
        """Yield every populated stratum, in a deterministic order."""
        for axis in TemporalAxis:
            for (ship_class, direction, value), acc in self.sorted_items(axis):
                yield StratumKey(ship_class, direction, axis, value), acc

    def total(self) -> SpeedAccumulator:
        """Return the statistics of every sample recorded, across all strata."""
        total = SpeedAccumulator()
        for _, acc in self.sorted_items(TemporalAxis.HOUR):
            total.merge(acc)
        return total

    def __len__(self) -> int:
        """Return the number of populated strata across the three tables."""
        return len(self.hour) + len(self.dow) + len(self.month)


def _sort_key(key: TableKey) -> tuple[str, int, int]:
    ship_class, direction, value = key
    return (ship_class.value, direction.index, value)
