"""The spatiotemporal knowledge graph."""

from collections.abc import Iterator
from dataclasses import dataclass, field, replace

from aiseta.errors import UnknownCellError, VersionMismatchError

from .accumulator import SpeedAccumulator
from .strata import StratumTables

GRAPH_FORMAT_VERSION = 1


@dataclass(kw_only=True)
class GraphMetadata:
    """Build metadata carried with a graph."""

    format_version: int = GRAPH_FORMAT_VERSION
    precision: int = 3
    """Geohash precision of the node cells."""

    message_count: int = 0
    """Messages of the sub-trajectories recorded into the graph."""

    trajectory_count: int = 0
    """Sub-trajectories recorded into the graph, excluding single-cell ones."""

    first_timestamp: float | None = None
    last_timestamp: float | None = None

    held_out_days: int | None = None
    """The held-out window the training data was checked against, if any."""

    record_final_run: bool = True


def merge_metadata(a: GraphMetadata, b: GraphMetadata) -> GraphMetadata:
    """Combine the metadata of two graphs.

    Raises:
        VersionMismatchError: If the graphs differ in format version or precision.
    """
    if a.format_version != b.format_version:
        raise VersionMismatchError(
            f"Cannot merge graph format versions {a.format_version} and {b.format_version}"
        )
    if a.precision != b.precision:
        raise VersionMismatchError(
            f"Cannot merge graphs of geohash precision {a.precision} and {b.precision}"
        )

    starts = [t for t in (a.first_timestamp, b.first_timestamp) if t is not None]
    ends = [t for t in (a.last_timestamp, b.last_timestamp) if t is not None]

    return replace(
        a,
        message_count=a.message_count + b.message_count,
        trajectory_count=a.trajectory_count + b.trajectory_count,
        first_timestamp=min(starts, default=None),
        last_timestamp=max(ends, default=None),
        held_out_days=a.held_out_days if a.held_out_days == b.held_out_days else None,
        record_final_run=a.record_final_run and b.record_final_run,
    )


@dataclass(slots=True)
class NodeStats:
    """Speed statistics of one geohash cell."""

    cell: str
    strata: StratumTables = field(default_factory=StratumTables)

    def copy(self) -> "NodeStats":
        """Return an independent deep copy."""
        return NodeStats(self.cell, self.strata.copy())


@dataclass(slots=True)
class EdgeStats:
    """Speed statistics of runs that left `source` for `destination`."""

    source: str
    destination: str
    transitions: int = 0
    strata: StratumTables = field(default_factory=StratumTables)

    @property
    def key(self) -> tuple[str, str]:
        """The (source, destination) pair."""
        return (self.source, self.destination)

    def copy(self) -> "EdgeStats":
        """Return an independent deep copy."""
        return EdgeStats(self.source, self.destination, self.transitions, self.strata.copy())


class KnowledgeGraph:
    """Geohash cell nodes and directed transition edges with stratified speed tables.

    Nodes and edges are created lazily, on first observation, so the graph holds
    exactly the cells and transitions seen in its training data.
    """

    def __init__(self, metadata: GraphMetadata | None = None) -> None:
        """Create an empty graph.

        Args:
            metadata: Build metadata, defaults for an empty precision-3 graph.
        """
        self.metadata = metadata or GraphMetadata()
        self.nodes: dict[str, NodeStats] = {}
        self.edges: dict[tuple[str, str], EdgeStats] = {}

    def __repr__(self) -> str:
        """Return a short summary of the graph."""
        return f"KnowledgeGraph(nodes={len(self.nodes)}, edges={len(self.edges)})"

    def __eq__(self, other: object) -> bool:
        """Compare metadata, nodes and edges field for field."""
        if not isinstance(other, KnowledgeGraph):
            return NotImplemented

        return (
            self.metadata == other.metadata
            and self.nodes == other.nodes
            and self.edges == other.edges
        )

    __hash__ = None  # type: ignore[assignment]

    def __contains__(self, cell: object) -> bool:
        """Is the given cell a node of the graph."""
        return cell in self.nodes

    @property
    def precision(self) -> int:
        """Geohash precision of the node cells."""
        return self.metadata.precision

    @property
    def sample_count(self) -> int:
        """Speed samples recorded into node tables."""
        return sum(node.strata.total().count for node in self.nodes.values())

    @property
    def strata_count(self) -> int:
        """Populated strata across all node and edge tables."""
        return sum(len(n.strata) for n in self.nodes.values()) + sum(
            len(e.strata) for e in self.edges.values()
        )

    def node(self, cell: str) -> NodeStats:
        """Return a node.

        Raises:
            UnknownCellError: If the cell was never observed.
        """
        try:
            return self.nodes[cell]
        except KeyError:
            raise UnknownCellError(f"Cell {cell!r} is not in the graph") from None

    def ensure_node(self, cell: str) -> NodeStats:
        """Return a node, creating it if this is its first observation."""
        node = self.nodes.get(cell)
        if node is None:
            node = self.nodes[cell] = NodeStats(cell)
        return node

    def ensure_edge(self, source: str, destination: str) -> EdgeStats:
        """Return an edge, creating it and its endpoint nodes on first observation."""
        edge = self.edges.get((source, destination))
        if edge is None:
            self.ensure_node(source)
            self.ensure_node(destination)
            edge = self.edges[(source, destination)] = EdgeStats(source, destination)
        return edge

    def successors(self, cell: str) -> list[str]:
        """Return the destinations of a cell's outgoing edges, sorted."""
        return sorted(dst for src, dst in self.edges if src == cell)

    def adjacency(self) -> dict[str, list[str]]:
        """Return sorted successor lists for every node."""
        adjacency: dict[str, list[str]] = {cell: [] for cell in sorted(self.nodes)}
        for source, destination in sorted(self.edges):
            adjacency[source].append(destination)
        return adjacency

    def iter_nodes(self) -> Iterator[NodeStats]:
        """Iterate over nodes in cell order."""
        for cell in sorted(self.nodes):
            yield self.nodes[cell]

    def iter_edges(self) -> Iterator[EdgeStats]:
        """Iterate over edges in (source, destination) order."""
        for key in sorted(self.edges):
            yield self.edges[key]

    def node_totals(self, cell: str) -> SpeedAccumulator:
        """Return the statistics of every sample recorded into a node."""
        return self.node(cell).strata.total()

    def update(self, other: "KnowledgeGraph") -> None:
        """Merge another graph into this one in place.

        Raises:
            VersionMismatchError: If the graphs differ in format version or precision.
        """
        self.metadata = merge_metadata(self.metadata, other.metadata)

        for cell, node in other.nodes.items():
            if cell in self.nodes:
                self.nodes[cell].strata.merge(node.strata)
            else:
                self.nodes[cell] = node.copy()

        for key, edge in other.edges.items():
            if key in self.edges:
                mine = self.edges[key]
                mine.transitions += edge.transitions
                mine.strata.merge(edge.strata)
            else:
                self.edges[key] = edge.copy()

    def copy(self) -> "KnowledgeGraph":
        """Return an independent deep copy."""
        graph = KnowledgeGraph(replace(self.metadata))
        graph.nodes = {cell: node.copy() for cell, node in self.nodes.items()}
        graph.edges = {key: edge.copy() for key, edge in self.edges.items()}
        return graph


def merge_graphs(a: KnowledgeGraph, b: KnowledgeGraph) -> KnowledgeGraph:
    """Return the union of two graphs, with accumulators merged field-wise.

    Merging is commutative, and associative up to float rounding of the sums.

    Raises:
        VersionMismatchError: If the graphs differ in format version or precision.
    """
    merged = a.copy()
    merged.update(b)
    return merged
