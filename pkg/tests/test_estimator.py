import datetime as dt
import itertools
import logging
import random

import pytest

from aiseta.ais import ShipClass, streams_from_messages
from aiseta.config import CountBasis, EstimatorConfig, FallbackSpeeds, GraphConfig
from aiseta.errors import NoRouteError, UnknownCellError
from aiseta.estimator import (
    PriorityLevel,
    QueryContext,
    RouteSegment,
    estimate_speed,
    fallback_estimate,
    find_route,
    lookup_stats,
    nearest_node,
    predict_segments,
    shortest_path,
)
from aiseta.evaluation import evaluate_segments
from aiseta.geo import CompassDirection, Position, geohash_center, geohash_encode, haversine_distance, travel_minutes
from aiseta.knowledge_graph import KnowledgeGraph, SpeedAccumulator, TemporalBins, build_graph, extract_cell_runs
from aiseta.segmentation import segment_streams
from aiseta.synth import FleetSpec, SpeedLaw, SpeedLawSpec, Waypoint, WorldSpec, generate

from builders import T0

A, B, C = "s00", "s01", "s04"
CARGO, TANKER = ShipClass.CARGO, ShipClass.TANKER
NE, SW = CompassDirection.NE, CompassDirection.SW

# T0 is 14:00 on a Tuesday in March
CTX = QueryContext(CARGO, T0, NE)


def put(graph: KnowledgeGraph, cell: str, ship_class, direction, bins: tuple[int, int, int], samples) -> None:
    graph.ensure_node(cell).strata.record(
        ship_class, direction, TemporalBins(*bins), SpeedAccumulator.from_samples(samples)
    )


class TestLevels:
    def test_lookup_order(self):
        order = [level.value for level in PriorityLevel.lookup_order()]
        assert order == ["L1a", "L1b", "L1c", "L2a", "L2b", "L3a", "L3b", "L3c", "L4a", "L4b", "L4c", "L4d", "L4e"]
        assert PriorityLevel.FALLBACK not in PriorityLevel.lookup_order()

    def test_groups(self):
        assert [level.group for level in PriorityLevel] == [1, 1, 1, 2, 2, 3, 3, 3, 4, 4, 4, 4, 4, 5]

    def test_fallback_has_no_slice(self):
        with pytest.raises(ValueError):
            PriorityLevel.FALLBACK.slice


class TestLookupStats:
    def test_direct_read_versus_time_aggregation(self):
        graph = KnowledgeGraph()
        put(graph, A, CARGO, NE, (14, 1, 3), [11.0, 13.0])

        stats = lookup_stats(graph, A, PriorityLevel.L1A, CTX)
        assert (stats.mean, stats.sample_count, stats.run_count) == (12.0, 2, 1)

        later = QueryContext(CARGO, T0 + 3600, NE)
        assert lookup_stats(graph, A, PriorityLevel.L1A, later) is None
        assert lookup_stats(graph, A, PriorityLevel.L2A, later).mean == 12.0

    def test_mean_is_count_weighted(self):
        graph = KnowledgeGraph()
        put(graph, A, CARGO, NE, (14, 1, 3), [10.0, 10.0])
        put(graph, A, CARGO, SW, (14, 1, 3), [16.0])
        assert lookup_stats(graph, A, PriorityLevel.L3A, CTX).mean == 12.0

    def test_no_direction_skips_direction_levels(self):
        graph = KnowledgeGraph()
        put(graph, A, CARGO, NE, (14, 1, 3), [10.0] * 9)
        ctx = QueryContext(CARGO, T0, None)
        assert lookup_stats(graph, A, PriorityLevel.L1A, ctx) is None
        assert lookup_stats(graph, A, PriorityLevel.L3A, ctx).sample_count == 9

    def test_unknown_cell(self):
        with pytest.raises(UnknownCellError):
            lookup_stats(KnowledgeGraph(), A, PriorityLevel.L1A, CTX)


class TestEstimateSpeed:
    def test_reliable_at_the_top(self):
        graph = KnowledgeGraph()
        put(graph, A, CARGO, NE, (14, 1, 3), [12.0] * 9)

        estimate = estimate_speed(graph, A, CTX)
        assert (estimate.level, estimate.reliable, estimate.speed) == (PriorityLevel.L1A, True, 12.0)

    def test_first_reliable_level_wins(self):
        graph = KnowledgeGraph()
        put(graph, A, CARGO, NE, (14, 1, 3), [10.0, 10.0])
        put(graph, A, CARGO, NE, (14, 4, 5), [16.0])
        put(graph, A, CARGO, NE, (3, 4, 6), [13.0] * 17)

        assert lookup_stats(graph, A, PriorityLevel.L1A, CTX).sample_count == 3
        assert lookup_stats(graph, A, PriorityLevel.L1C, CTX).sample_count == 2

        estimate = estimate_speed(graph, A, CTX)
        assert estimate.level is PriorityLevel.L2A
        assert estimate.reliable
        assert estimate.sample_count == 20
        assert estimate.speed == pytest.approx((20 + 16 + 13 * 17) / 20)

    def test_most_specific_unreliable_level(self):
        graph = KnowledgeGraph()
        put(graph, A, CARGO, NE, (14, 1, 3), [9.0, 10.0, 11.0])

        estimate = estimate_speed(graph, A, CTX)
        assert (estimate.level, estimate.reliable, estimate.speed) == (PriorityLevel.L1A, False, 10.0)

    @pytest.mark.parametrize(
        ("ship_class", "direction", "bins", "expected"),
        [
            (CARGO, NE, (14, 5, 7), PriorityLevel.L1A),
            (CARGO, NE, (2, 1, 7), PriorityLevel.L1B),
            (CARGO, NE, (2, 5, 3), PriorityLevel.L1C),
            (CARGO, NE, (2, 5, 7), PriorityLevel.L2A),
            (TANKER, NE, (2, 5, 7), PriorityLevel.L2B),
            (CARGO, SW, (14, 5, 7), PriorityLevel.L3A),
            (CARGO, SW, (2, 1, 7), PriorityLevel.L3B),
            (CARGO, SW, (2, 5, 3), PriorityLevel.L3C),
            (CARGO, SW, (2, 5, 7), PriorityLevel.L4A),
            (TANKER, SW, (14, 5, 7), PriorityLevel.L4B),
            (TANKER, SW, (2, 1, 7), PriorityLevel.L4C),
            (TANKER, SW, (2, 5, 3), PriorityLevel.L4D),
            (TANKER, SW, (2, 5, 7), PriorityLevel.L4E),
        ],
    )
    def test_each_level_is_reached(self, ship_class, direction, bins, expected):
        graph = KnowledgeGraph()
        put(graph, A, ship_class, direction, bins, [15.0] * 8)

        estimate = estimate_speed(graph, A, CTX)
        assert estimate.level is expected
        assert estimate.reliable

    def test_observer_sees_levels_in_order(self):
        graph = KnowledgeGraph()
        put(graph, A, CARGO, NE, (2, 5, 7), [15.0] * 8)

        seen = []
        estimate_speed(graph, A, CTX, on_lookup=lambda level, stats: seen.append((level, stats is not None)))
        assert seen == [
            (PriorityLevel.L1A, False),
            (PriorityLevel.L1B, False),
            (PriorityLevel.L1C, False),
            (PriorityLevel.L2A, True),
        ]

    def test_empty_node_uses_fallback(self):
        graph = KnowledgeGraph()
        graph.ensure_node(A)

        estimate = estimate_speed(graph, A, CTX)
        assert (estimate.speed, estimate.level, estimate.reliable) == (14.0, PriorityLevel.FALLBACK, False)
        assert estimate.used_fallback

    def test_unknown_cell_uses_fallback(self):
        estimate = estimate_speed(KnowledgeGraph(), A, QueryContext(TANKER, T0, NE))
        assert estimate.speed == 12.5
        assert estimate.sample_count == 0

    def test_configured_fallback(self):
        config = EstimatorConfig(fallback=FallbackSpeeds(other=9.0))
        assert fallback_estimate(ShipClass.OTHER, config).speed == 9.0

    def test_fallback_speeds_must_be_positive(self):
        with pytest.raises(ValueError):
            FallbackSpeeds(cargo=0.0)

    def test_run_count_basis(self):
        graph = KnowledgeGraph()
        for _ in range(3):
            put(graph, A, CARGO, NE, (14, 1, 3), [12.0] * 5)

        assert estimate_speed(graph, A, CTX).reliable

        by_runs = estimate_speed(graph, A, CTX, EstimatorConfig(count_basis=CountBasis.RUNS))
        assert (by_runs.level, by_runs.reliable, by_runs.run_count) == (PriorityLevel.L1A, False, 3)

    def test_threshold_is_inclusive(self):
        graph = KnowledgeGraph()
        put(graph, A, CARGO, NE, (14, 1, 3), [12.0] * 7)
        assert not estimate_speed(graph, A, CTX).reliable
        assert estimate_speed(graph, A, CTX, EstimatorConfig(reliability_threshold=7)).reliable

    def test_enabled_levels(self):
        graph = KnowledgeGraph()
        put(graph, A, CARGO, NE, (14, 1, 3), [12.0] * 9)
        config = EstimatorConfig(levels=[PriorityLevel.L4E])
        assert estimate_speed(graph, A, CTX, config).level is PriorityLevel.L4E


class TestPredictSegments:
    def test_distance_over_speed(self):
        graph = KnowledgeGraph()
        put(graph, A, CARGO, NE, (14, 1, 3), [12.0] * 9)

        prediction = predict_segments(graph, [RouteSegment(A, 44.448, NE)], CARGO, T0)
        assert prediction.total_minutes == pytest.approx(120.0)
        assert prediction.arrival.timestamp() == pytest.approx(T0 + 7200.0)
        assert not prediction.replay

    def test_segments_add_up(self):
        graph = KnowledgeGraph()
        put(graph, A, CARGO, NE, (14, 1, 3), [10.0] * 9)
        put(graph, B, CARGO, NE, (14, 1, 3), [20.0] * 9)
        put(graph, B, CARGO, NE, (15, 1, 3), [20.0] * 9)

        d = 18.52
        prediction = predict_segments(graph, [RouteSegment(A, d, NE), RouteSegment(B, d, NE)], CARGO, T0)
        assert prediction.total_minutes == pytest.approx(travel_minutes(d, 10.0) + travel_minutes(d, 20.0))
        assert prediction.distance == pytest.approx(2 * d)

    def test_clock_rolls_forward(self):
        graph = KnowledgeGraph()
        put(graph, A, CARGO, NE, (14, 1, 3), [12.0] * 9)
        put(graph, B, CARGO, NE, (14, 1, 3), [5.0] * 9)
        put(graph, B, CARGO, NE, (16, 1, 3), [24.0] * 9)

        prediction = predict_segments(graph, [RouteSegment(A, 44.448, NE), RouteSegment(B, 44.448, NE)], CARGO, T0)
        assert prediction.segments[1].timestamp == pytest.approx(T0 + 7200.0)
        assert prediction.segments[1].estimate.speed == 24.0

    def test_replay_uses_entry_times(self):
        graph = KnowledgeGraph()
        put(graph, A, CARGO, NE, (14, 1, 3), [12.0] * 9)
        put(graph, A, CARGO, NE, (20, 1, 3), [6.0] * 9)

        segments = [RouteSegment(A, 44.448, NE, entry_timestamp=T0 + 6 * 3600)]
        prediction = predict_segments(graph, segments, CARGO, T0)
        assert prediction.replay
        assert prediction.total_minutes == pytest.approx(240.0)

    def test_unknown_cell(self, caplog):
        segments = [RouteSegment(C, 44.448, NE)]
        with caplog.at_level(logging.WARNING, logger="aiseta"):
            prediction = predict_segments(KnowledgeGraph(), segments, CARGO, T0)

        assert any(r.levelno == logging.WARNING and C in r.getMessage() for r in caplog.records)
        assert prediction.segments[0].estimate.used_fallback
        assert prediction.total_minutes == pytest.approx(travel_minutes(44.448, 14.0))

        with pytest.raises(UnknownCellError):
            predict_segments(KnowledgeGraph(), segments, CARGO, T0, strict=True)

    def test_negative_distance(self):
        with pytest.raises(ValueError):
            predict_segments(KnowledgeGraph(), [RouteSegment(A, -1.0, NE)], CARGO, T0)

    def test_no_segments(self):
        prediction = predict_segments(KnowledgeGraph(), [], CARGO, T0)
        assert prediction.total_minutes == 0.0
        assert prediction.arrival.timestamp() == T0


def linear_graph() -> KnowledgeGraph:
    graph = KnowledgeGraph()
    graph.ensure_edge(A, B)
    graph.ensure_edge(B, C)
    return graph


class TestFindRoute:
    def test_same_cell(self):
        origin, destination = Position(0.2, 0.2), Position(1.0, 1.0)
        segments = find_route(linear_graph(), origin, destination)

        assert len(segments) == 1
        assert segments[0].cell == A
        assert segments[0].distance == pytest.approx(haversine_distance(origin, destination))
        assert segments[0].direction is NE

    def test_same_position(self):
        assert find_route(linear_graph(), Position(0.2, 0.2), Position(0.2, 0.2)) == []

    def test_linear_graph(self):
        graph = linear_graph()
        segments = find_route(graph, geohash_center(A), geohash_center(C))

        assert shortest_path(graph, A, C) == [A, B, C]
        assert [s.cell for s in segments] == [A, B]
        assert segments[0].distance == pytest.approx(haversine_distance(geohash_center(A), geohash_center(B)))
        assert all(s.direction is CompassDirection.E for s in segments)
        assert all(s.entry_timestamp is None for s in segments)

    def test_edges_are_directed(self):
        with pytest.raises(NoRouteError):
            find_route(linear_graph(), geohash_center(C), geohash_center(A))

    def test_strict_requires_graph_cells(self):
        outside = Position(0.7, 4.5)
        with pytest.raises(NoRouteError):
            find_route(linear_graph(), geohash_center(A), outside, strict=True)

    def test_snaps_to_nearest_node(self):
        outside = Position(0.7, 4.5)
        assert nearest_node(linear_graph(), outside, 250.0) == C
        segments = find_route(linear_graph(), geohash_center(A), outside)
        assert [s.cell for s in segments] == [A, B]

    def test_snap_radius(self):
        with pytest.raises(NoRouteError):
            find_route(linear_graph(), geohash_center(A), Position(40.0, 40.0))

    def test_shortest_path_is_optimal(self):
        rng = random.Random(17)
        cells = sorted({geohash_encode(Position(rng.uniform(0, 10), rng.uniform(0, 10)), 3) for _ in range(7)})
        graph = KnowledgeGraph()
        for source, destination in itertools.permutations(cells, 2):
            if rng.random() < 0.45:
                graph.ensure_edge(source, destination)

        def cost(path):
            return sum(
                haversine_distance(geohash_center(a), geohash_center(b)) for a, b in zip(path, path[1:])
            )

        def brute_force(source, destination):
            best = None
            others = [c for c in cells if c not in (source, destination)]
            for size in range(len(others) + 1):
                for middle in itertools.permutations(others, size):
                    path = [source, *middle, destination]
                    if all((a, b) in graph.edges for a, b in zip(path, path[1:])):
                        if best is None or cost(path) < best:
                            best = cost(path)
            return best

        for source, destination in itertools.permutations(graph.nodes, 2):
            expected = brute_force(source, destination)
            if expected is None:
                with pytest.raises(NoRouteError):
                    shortest_path(graph, source, destination)
            else:
                assert cost(shortest_path(graph, source, destination)) == pytest.approx(expected)


class TestLevelAblation:
    """A world that sails at 16 kn by day and 8 kn by night."""

    NIGHT_HOURS = {18, 19, 20, 21, 22, 23, 0, 1, 2}

    @pytest.fixture(scope="class")
    def trajectories(self):
        spec = WorldSpec(
            seed=23,
            start=dt.datetime(2023, 3, 1, tzinfo=dt.timezone.utc),
            end=dt.datetime(2023, 3, 31, tzinfo=dt.timezone.utc),
            precision=4,
            fleets=[
                FleetSpec(
                    ship_class=CARGO,
                    count=30,
                    route=[Waypoint(lat=0.7, lon=0.1), Waypoint(lat=0.7, lon=4.0)],
                    base_speed=16.0,
                    law=SpeedLawSpec(kind=SpeedLaw.HOUR_STEP, night_speed=8.0),
                    trips=2,
                    round_trip=True,
                )
            ],
        )
        return segment_streams(streams_from_messages(list(generate(spec).messages)))

    @pytest.fixture(scope="class")
    def graph(self, trajectories):
        return build_graph(trajectories, GraphConfig(precision=4))

    def night_bias(self, graph, trajectories, level: PriorityLevel) -> float:
        # In-sample replay, so every stratum a segment asks for exists
        records = evaluate_segments(graph, trajectories, EstimatorConfig(levels=[level]))

        entry_hours: dict[tuple[int, int, int], int] = {}
        for t in trajectories:
            runs = extract_cell_runs(t, precision=4)[:-1]
            timed = [run for run in runs if run.exit_timestamp > run.entry_timestamp]
            for i, run in enumerate(timed):
                entry_hours[(t.vessel_id, t.index, i)] = TemporalBins.from_timestamp(run.entry_timestamp).hour

        night = [
            r
            for r in records
            if entry_hours[(r.vessel_id, r.trajectory_index, r.segment_index)] in self.NIGHT_HOURS
        ]
        assert len(night) > 100
        assert all(r.level is level for r in night)
        return sum((r.predicted_time - r.actual_time) / r.actual_time for r in night) / len(night)

    def test_hour_of_day_removes_night_bias(self, graph, trajectories):
        assert abs(self.night_bias(graph, trajectories, PriorityLevel.L1A)) < 0.05

    def test_all_time_pooling_is_biased_at_night(self, graph, trajectories):
        # Night runs are predicted at the day and night average, so too fast
        assert self.night_bias(graph, trajectories, PriorityLevel.L2A) < -0.15
