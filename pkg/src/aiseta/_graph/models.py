"""Persisted record models of the graph file."""

from dataclasses import dataclass, field

from aiseta._ais.message import ShipClass
from aiseta._geo.direction import CompassDirection

from .accumulator import SpeedAccumulator
from .graph import EdgeStats, NodeStats
from .strata import StratumKey, StratumTables, TemporalAxis


@dataclass(kw_only=True)
class StratumRecord:
    """One populated stratum and its accumulator."""

    axis: TemporalAxis
    ship_class: ShipClass
    direction: CompassDirection
    bin: int
    sum: float
    sum_sq: float
    min: float
    max: float
    count: int
    runs: int

    @classmethod
    def from_entry(cls, key: StratumKey, acc: SpeedAccumulator) -> "StratumRecord":
        """Create a record from a stratum key and its accumulator."""
        return cls(
            axis=key.axis,
            ship_class=key.ship_class,
            direction=key.direction,
            bin=key.bin,
            sum=acc.sum,
            sum_sq=acc.sum_sq,
            min=acc.min,
            max=acc.max,
            count=acc.count,
            runs=acc.runs,
        )

    @property
    def key(self) -> StratumKey:
        """The stratum key of this record."""
        return StratumKey(self.ship_class, self.direction, self.axis, self.bin)

    @property
    def accumulator(self) -> SpeedAccumulator:
        """The accumulator of this record."""
        return SpeedAccumulator(self.sum, self.sum_sq, self.min, self.max, self.count, self.runs)


def strata_to_records(strata: StratumTables) -> list[StratumRecord]:
    """List the populated strata of a table set."""
    return [StratumRecord.from_entry(key, acc) for key, acc in strata.entries()]


def strata_from_records(records: list[StratumRecord]) -> StratumTables:
    """Rebuild a table set from its records.

    Raises:
        ValueError: If a record is invalid or repeats a stratum.
    """
    strata = StratumTables()
    for record in records:
        key = record.key
        if record.count < 1:
            raise ValueError(f"Stratum {key} has no samples")

        table = strata.table(key.axis)
        table_key = (key.ship_class, key.direction, key.bin)
        if table_key in table:
            raise ValueError(f"Stratum {key} is listed twice")
        table[table_key] = record.accumulator

    return strata


@dataclass(kw_only=True)
class NodeRecord:
    """A node and its populated strata."""

    cell: str
    strata: list[StratumRecord] = field(default_factory=list)

    @classmethod
    def from_node(cls, node: NodeStats) -> "NodeRecord":
        """Create a record from a node."""
        return cls(cell=node.cell, strata=strata_to_records(node.strata))

    def to_node(self) -> NodeStats:
        """Rebuild the node."""
        return NodeStats(self.cell, strata_from_records(self.strata))


@dataclass(kw_only=True)
class EdgeRecord:
    """An edge, its transition count and its populated strata."""

    source: str
    destination: str
    transitions: int
    strata: list[StratumRecord] = field(default_factory=list)

    @classmethod
    def from_edge(cls, edge: EdgeStats) -> "EdgeRecord":
        """Create a record from an edge."""
        return cls(
            source=edge.source,
            destination=edge.destination,
            transitions=edge.transitions,
            strata=strata_to_records(edge.strata),
        )

    def to_edge(self) -> EdgeStats:
        """Rebuild the edge."""
        return EdgeStats(
            self.source, self.destination, self.transitions, strata_from_records(self.strata)
        )
