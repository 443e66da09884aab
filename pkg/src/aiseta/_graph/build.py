"""Knowledge graph construction from sub-trajectories."""

from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import partial

from aiseta._ais.message import AisMessage
from aiseta._evaluation.split import is_held_out
from aiseta._geo.direction import CompassDirection, quantize_direction
from aiseta._geo.geohash import geohash_encode
from aiseta._geo.position import Position, haversine_distance, initial_bearing
from aiseta._logger import logger
from aiseta._parallel import map_ordered
from aiseta._segmentation.segment import SubTrajectory
from aiseta._transmitters.select import TransmitterLabel
from aiseta.config import GraphConfig
from aiseta.errors import DegenerateBearingError, LeakageError

from .accumulator import SpeedAccumulator
from .graph import GraphMetadata, KnowledgeGraph
from .strata import TemporalBins


@dataclass(frozen=True, slots=True)
class CellRun:
    """A maximal sequence of consecutive messages inside one geohash cell."""

    cell: str
    entry_timestamp: float
    exit_timestamp: float
    entry_position: Position
    exit_position: Position
    samples: tuple[float, ...]
    """Speed over ground of each message in the run, in knots."""

    path_length: float
    """Sum of great-circle hops between consecutive messages of the run, in km."""

    @property
    def duration(self) -> float:
        """Minutes from the first to the last message of the run."""
        return (self.exit_timestamp - self.entry_timestamp) / 60.0

    def __len__(self) -> int:
        """Return the number of messages in the run."""
        return len(self.samples)


def _close_run(cell: str, messages: Sequence[AisMessage]) -> CellRun:
    path = sum(
        haversine_distance(a.position, b.position)
        for a, b in zip(messages, messages[1:])
    )
    return CellRun(
        cell=cell,
        entry_timestamp=messages[0].timestamp,
        exit_timestamp=messages[-1].timestamp,
        entry_position=messages[0].position,
        exit_position=messages[-1].position,
        samples=tuple(m.sog for m in messages),
        path_length=path,
    )


def extract_cell_runs(
    trajectory: SubTrajectory | Sequence[AisMessage], precision: int = 3
) -> list[CellRun]:
    """Group consecutive messages sharing a geohash cell into runs.

    A change of cell closes the current run and opens the next, so a trajectory
    that revisits a cell produces a new run for each visit.

    Args:
        trajectory: A sub-trajectory, or its time-ordered messages.
        precision: The geohash precision of the cells.

    Returns:
        The runs, in time order.
    """
    messages = trajectory.messages if isinstance(trajectory, SubTrajectory) else trajectory

    runs: list[CellRun] = []
    current: list[AisMessage] = []
    current_cell = ""
    for message in messages:
        cell = geohash_encode(message.position, precision)
        if current and cell != current_cell:
            runs.append(_close_run(current_cell, current))
            current = []
        current_cell = cell
        current.append(message)

    if current:
        runs.append(_close_run(current_cell, current))

    return runs


def run_directions(runs: Sequence[CellRun]) -> list[CompassDirection | None]:
    """Quantize each run's entry-to-exit bearing.

    A run whose entry and exit coincide reuses the previous run's direction, or has
    no direction if it is the first run.
    """
    directions: list[CompassDirection | None] = []
    previous: CompassDirection | None = None
    for run in runs:
        try:
            previous = quantize_direction(initial_bearing(run.entry_position, run.exit_position))
        except DegenerateBearingError:
            pass
        directions.append(previous)

    return directions


def record_trajectory(
    graph: KnowledgeGraph, trajectory: SubTrajectory, config: GraphConfig | None = None
) -> bool:
    """Record one sub-trajectory into a graph in place.

    On every transition the run just completed is flushed into the cell it left and
    into the directed edge to the next cell. The final run updates its node only.

    Returns:
        False if the sub-trajectory never left its first cell and was ignored.
    """
    config = config or GraphConfig()

    runs = extract_cell_runs(trajectory, graph.precision)
    if len(runs) < 2:
        return False

    directions = run_directions(runs)
    last = len(runs) - 1
    for i, run in enumerate(runs):
        node = graph.ensure_node(run.cell)
        edge = None
        if i < last:
            edge = graph.ensure_edge(run.cell, runs[i + 1].cell)
            edge.transitions += 1

        direction = directions[i]
        if direction is None or (edge is None and not config.record_final_run):
            continue

        acc = SpeedAccumulator.from_samples(run.samples)
        bins = TemporalBins.from_timestamp(run.entry_timestamp)
        node.strata.record(trajectory.ship_class, direction, bins, acc)
        if edge is not None:
            edge.strata.record(trajectory.ship_class, direction, bins, acc)

    metadata = graph.metadata
    metadata.message_count += len(trajectory.messages)
    metadata.trajectory_count += 1

    start, end = trajectory.messages[0].timestamp, trajectory.messages[-1].timestamp
    if metadata.first_timestamp is None or start < metadata.first_timestamp:
        metadata.first_timestamp = start
    if metadata.last_timestamp is None or end > metadata.last_timestamp:
        metadata.last_timestamp = end

    return True


def _empty_graph(config: GraphConfig, held_out_days: int | None) -> KnowledgeGraph:
    return KnowledgeGraph(
        GraphMetadata(
            precision=config.precision,
            held_out_days=held_out_days,
            record_final_run=config.record_final_run,
        )
    )


def build_vessel_graph(
    trajectories: Sequence[SubTrajectory],
    *,
    config: GraphConfig,
    held_out_days: int | None = None,
) -> KnowledgeGraph:
    """Build the partial graph of one vessel, its sub-trajectories in time order."""
    graph = _empty_graph(config, held_out_days)
    for trajectory in sorted(trajectories, key=lambda t: (t.messages[0].timestamp, t.index)):
        record_trajectory(graph, trajectory, config)
    return graph


def build_graph(
    trajectories: Iterable[SubTrajectory],
    config: GraphConfig | None = None,
    *,
    labels: Mapping[int, TransmitterLabel] | None = None,
    held_out_days: int | None = None,
    jobs: int = 1,
) -> KnowledgeGraph:
    """Build a knowledge graph from training sub-trajectories.

    Every vessel is built into its own partial graph, and the partial graphs are
    merged in ascending vessel order. The result does not depend on input order or
    on the number of workers.

    Args:
        trajectories: Eligible sub-trajectories.
        config: Graph construction settings.
        labels: Transmitter labels. When given, only primary transmitters are used,
            and vessels without a label are skipped.
        held_out_days: The held-out window of the split. When given, trajectories
            starting inside it are rejected and the window is stored in the metadata.
        jobs: Worker processes to use.

    Returns:
        The graph.

    Raises:
        LeakageError: If a trajectory starts inside the held-out window.
    """
    config = config or GraphConfig()

    by_vessel: dict[int, list[SubTrajectory]] = defaultdict(list)
    skipped = 0
    for trajectory in trajectories:
        if labels is not None:
            label = labels.get(trajectory.vessel_id)
            if label is None or not label.is_primary:
                skipped += 1
                continue

        if held_out_days is not None and is_held_out(
            trajectory.messages[0].timestamp, held_out_days
        ):
            raise LeakageError(
                f"Sub-trajectory {trajectory.key} starts inside the held-out window"
            )

        by_vessel[trajectory.vessel_id].append(trajectory)

    if skipped:
        logger.info("Skipped %d sub-trajectories of non-primary transmitters", skipped)

    groups = [by_vessel[vessel_id] for vessel_id in sorted(by_vessel)]
    partials = map_ordered(
        partial(build_vessel_graph, config=config, held_out_days=held_out_days), groups, jobs
    )

    graph = _empty_graph(config, held_out_days)
    for partial_graph in partials:
        graph.update(partial_graph)

    if not graph.nodes:
        logger.warning("No sub-trajectory left its initial cell, the graph is empty")

    logger.info(
        "Built graph from %d vessels: %d nodes, %d edges, %d samples",
        len(groups),
        len(graph.nodes),
        len(graph.edges),
        graph.sample_count,
    )
    return graph
