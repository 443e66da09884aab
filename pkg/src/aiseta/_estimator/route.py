"""Point-to-point routing over the directed cell graph."""

import heapq
import math
from functools import cache

from aiseta._geo.direction import quantize_direction
from aiseta._geo.geohash import geohash_center, geohash_encode
from aiseta._geo.position import Position, haversine_distance, initial_bearing
from aiseta._graph.graph import KnowledgeGraph
from aiseta._logger import logger
from aiseta.errors import NoRouteError

from .estimate import RouteSegment


@cache
def _center(cell: str) -> Position:
    return geohash_center(cell)


def _hop(source: str, destination: str) -> float:
    return haversine_distance(_center(source), _center(destination))


def nearest_node(graph: KnowledgeGraph, position: Position, radius_km: float) -> str | None:
    """Return the node whose cell center is closest to a position, within a radius."""
    best: tuple[float, str] | None = None
    for cell in graph.nodes:
        candidate = (haversine_distance(position, _center(cell)), cell)
        if candidate[0] <= radius_km and (best is None or candidate < best):
            best = candidate

    return best[1] if best else None


def _resolve(
    graph: KnowledgeGraph, position: Position, label: str, strict: bool, radius_km: float
) -> str:
    cell = geohash_encode(position, graph.precision)
    if cell in graph:
        return cell

    if strict:
        raise NoRouteError(f"The {label} cell {cell} is not in the graph")

    nearest = nearest_node(graph, position, radius_km)
    if nearest is None:
        raise NoRouteError(f"No graph node within {radius_km} km of the {label}")

    logger.warning("The %s cell %s is not in the graph, snapped to %s", label, cell, nearest)
    return nearest


def shortest_path(graph: KnowledgeGraph, source: str, destination: str) -> list[str]:
    """Find the minimum-distance cell path along directed edges.

    Edge weights are great-circle distances between cell centers. Ties are broken
    by cell code, so the path is deterministic.

    Raises:
        NoRouteError: If the destination cannot be reached.
    """
    adjacency = graph.adjacency()
    distances: dict[str, float] = {source: 0.0}
    previous: dict[str, str] = {}
    queue = [(0.0, source)]

    while queue:
        distance, cell = heapq.heappop(queue)
        if cell == destination:
            break

        if distance > distances.get(cell, math.inf):
            continue

        for neighbor in adjacency.get(cell, []):
            candidate = distance + _hop(cell, neighbor)
            if candidate < distances.get(neighbor, math.inf):
                distances[neighbor] = candidate
                previous[neighbor] = cell
                heapq.heappush(queue, (candidate, neighbor))

    if destination not in distances:
        raise NoRouteError(f"{destination} cannot be reached from {source}")

    # Walk back from the destination
    path = [destination]
    while path[-1] != source:
        path.append(previous[path[-1]])
    path.reverse()

    return path


def find_route(
    graph: KnowledgeGraph,
    origin: Position,
    destination: Position,
    *,
    strict: bool = False,
    snap_radius_km: float = 250.0,
) -> list[RouteSegment]:
    """Route between two positions over the graph's observed transitions.

    Every hop of the shortest cell path becomes a segment of its source cell, with
    the center-to-center distance and direction. Origin and destination in the same
    cell give a single segment along the direct great circle.

    Args:
        graph: The knowledge graph.
        origin: The departure position.
        destination: The arrival position.
        strict: Require both positions to lie in graph cells. Otherwise they snap
            to the nearest node within `snap_radius_km`.
        snap_radius_km: The snapping radius.

    Returns:
        The route segments, without entry times.

    Raises:
        NoRouteError: If an endpoint cannot be placed on the graph or the
            destination is unreachable.
    """
    start = _resolve(graph, origin, "origin", strict, snap_radius_km)
    end = _resolve(graph, destination, "destination", strict, snap_radius_km)

    if start == end:
        distance = haversine_distance(origin, destination)
        if distance == 0.0:
            return []
        direction = quantize_direction(initial_bearing(origin, destination))
        return [RouteSegment(start, distance, direction)]

    path = shortest_path(graph, start, end)
    segments = [
        RouteSegment(
            source,
            _hop(source, target),
            quantize_direction(initial_bearing(_center(source), _center(target))),
        )
        for source, target in zip(path, path[1:])
    ]

    logger.debug("Routed %s to %s through %d cells", start, end, len(path))
    return segments
