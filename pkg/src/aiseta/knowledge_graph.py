"""The spatiotemporal knowledge graph.

Nodes are geohash cells and directed edges are observed cell transitions. Each node
and edge keeps speed statistics stratified by vessel class, direction of travel
and one temporal bin (hour of day, day of week or month of year).
"""

from ._graph.accumulator import SpeedAccumulator, accumulate, merge_accumulators
from ._graph.build import (
    CellRun,
    build_graph,
    build_vessel_graph,
    extract_cell_runs,
    record_trajectory,
    run_directions,
)
from ._graph.graph import (
    GRAPH_FORMAT_VERSION,
    EdgeStats,
    GraphMetadata,
    KnowledgeGraph,
    NodeStats,
    merge_graphs,
    merge_metadata,
)
from ._graph.persistence import dumps_graph, load_graph, loads_graph, save_graph
from ._graph.strata import StratumKey, StratumTables, TemporalAxis, TemporalBins

__all__ = [
    "GRAPH_FORMAT_VERSION",
    "CellRun",
    "EdgeStats",
    "GraphMetadata",
    "KnowledgeGraph",
    "NodeStats",
    "SpeedAccumulator",
    "StratumKey",
    "StratumTables",
    "TemporalAxis",
    "TemporalBins",
    "accumulate",
    "build_graph",
    "build_vessel_graph",
    "dumps_graph",
    "extract_cell_runs",
    "load_graph",
    "loads_graph",
    "merge_accumulators",
    "merge_graphs",
    "merge_metadata",
    "record_trajectory",
    "run_directions",
    "save_graph",
]
