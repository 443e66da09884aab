import datetime as dt
import json
import math
import random

import pytest

from aiseta.config import EvaluationConfig, SplitConfig
from aiseta.errors import EmptyInputError, LeakageError
from aiseta.estimator import PriorityLevel
from aiseta.evaluation import (
    SegmentRecord,
    check_leakage,
    compute_metrics,
    evaluate_segments,
    evaluate_trajectory,
    export_node_errors,
    is_held_out,
    node_error_features,
    temporal_split,
)
from aiseta.knowledge_graph import KnowledgeGraph, build_graph
from aiseta.transmitters import TransmitterClass, TransmitterLabel

from builders import T0, messages_in_cells, trajectory


def utc(*args) -> float:
    return dt.datetime(*args, tzinfo=dt.timezone.utc).timestamp()


def record(
    error: float,
    *,
    actual: float = 60.0,
    vessel_id: int = 1,
    trajectory_index: int = 0,
    segment_index: int = 0,
    cell: str = "s00",
    used_fallback: bool = False,
    reliable: bool = True,
    displacement: float = 200.0,
) -> SegmentRecord:
    return SegmentRecord(
        vessel_id=vessel_id,
        trajectory_index=trajectory_index,
        segment_index=segment_index,
        cell=cell,
        actual_time=actual,
        predicted_time=actual + error,
        distance=10.0,
        level=PriorityLevel.FALLBACK if used_fallback else PriorityLevel.L1A,
        reliable=reliable,
        used_fallback=used_fallback,
        trajectory_displacement=displacement,
    )


class TestSplit:
    @pytest.mark.parametrize(
        ("time", "held_out"),
        [
            (utc(2023, 3, 25, 0, 0), True),
            (utc(2023, 3, 24, 23, 59), False),
            (utc(2023, 2, 22, 0, 0), True),
            (utc(2023, 2, 21, 23, 59), False),
            (utc(2024, 2, 23, 0, 0), True),
            (utc(2024, 2, 22, 12, 0), False),
            (utc(2023, 4, 30, 23, 59), True),
        ],
    )
    def test_last_week_of_month(self, time, held_out):
        assert is_held_out(time) is held_out

    def test_window_is_configurable(self):
        assert not is_held_out(utc(2023, 3, 25), held_out_days=3)
        assert is_held_out(utc(2023, 3, 29), held_out_days=3)

    def test_trajectories_split_by_start(self):
        # Starts just before the boundary and runs into the held-out week
        straddling = trajectory(messages_in_cells([0.2, 1.6], [10, 10], start=utc(2023, 3, 24, 23, 55)), index=0)
        late = trajectory(messages_in_cells([0.2, 1.6], [10, 10], start=utc(2023, 3, 27, 8)), index=1)
        early = trajectory(messages_in_cells([0.2, 1.6], [10, 10], start=T0), index=2)

        train, test = temporal_split([straddling, late, early], SplitConfig())
        assert train == [straddling, early]
        assert test == [late]


def replay_world():
    # Constant 12 kn through three cells, the same route on different days
    def crossing(vessel_id, start, index=0):
        messages = messages_in_cells(
            [0.2, 0.5, 0.8, 1.5, 1.8, 2.1, 2.9, 3.2], [12.0] * 8, vessel_id=vessel_id, start=start
        )
        return trajectory(messages, index=index)

    train = [crossing(v, T0 + 86400 * v) for v in range(1, 6)]
    test = [crossing(7, utc(2023, 3, 27, 14)), crossing(8, utc(2023, 3, 28, 14))]
    return train, test


class TestEvaluateSegments:
    def test_replay_records(self):
        train, test = replay_world()
        graph = build_graph(train, held_out_days=7)
        records = evaluate_segments(graph, test)

        # Two timed runs per trajectory, the final run is not a segment
        assert [(r.vessel_id, r.segment_index) for r in records] == [(7, 0), (7, 1), (8, 0), (8, 1)]
        assert all(r.actual_time == 20.0 for r in records)
        assert all(not r.used_fallback for r in records)
        assert [r.cell for r in records[:2]] == ["s00", "s01"]

    def test_unseen_cells_use_fallback(self):
        _, test = replay_world()
        records = evaluate_segments(KnowledgeGraph(), test)
        assert all(r.used_fallback and not r.reliable for r in records)

    def test_single_message_runs_are_skipped(self):
        t = trajectory(messages_in_cells([0.2, 1.6, 3.0, 3.2], [10] * 4))
        assert evaluate_trajectory(t, graph=KnowledgeGraph()) == []

    def test_labels_filter_vessels(self):
        train, test = replay_world()
        graph = build_graph(train)
        labels = {7: TransmitterLabel(7, TransmitterClass.PRIMARY, 0.8), 8: TransmitterLabel(8, TransmitterClass.SECONDARY, 0.1)}
        records = evaluate_segments(graph, test, labels=labels)
        assert {r.vessel_id for r in records} == {7}

    def test_workers_do_not_change_records(self):
        train, test = replay_world()
        graph = build_graph(train)
        assert evaluate_segments(graph, test, jobs=2) == evaluate_segments(graph, list(reversed(test)))


class TestLeakage:
    def test_matching_window(self):
        train, test = replay_world()
        check_leakage(build_graph(train, held_out_days=7), test, 7)

    def test_graph_without_window(self):
        train, test = replay_world()
        with pytest.raises(LeakageError):
            check_leakage(build_graph(train), test, 7)

    def test_training_trajectory_in_test_set(self):
        train, test = replay_world()
        with pytest.raises(LeakageError):
            check_leakage(build_graph(train, held_out_days=7), test + train[:1], 7)


class TestMetrics:
    def test_single_trajectory(self):
        report = compute_metrics([record(3.0), record(4.0, segment_index=1)])

        assert report.segment.mae_median == 3.5
        assert report.segment.rmse_median == pytest.approx(math.sqrt(12.5))
        assert report.trajectory.abs_error_median == pytest.approx(7.0)
        assert report.trajectory.relative_error_median == pytest.approx(7.0 / 120.0)

    def test_grouped_per_trajectory(self):
        records = [
            record(1.0),
            record(-1.0, segment_index=1),
            record(6.0, trajectory_index=1),
            record(10.0, vessel_id=2),
        ]
        report = compute_metrics(records)

        assert report.segment.trajectories == 3
        assert report.segment.segments == 4
        assert report.segment.mae_median == 6.0
        assert report.segment.mae_mean == pytest.approx(17.0 / 3)
        assert report.trajectory.abs_error_median == 6.0

    def test_rmse_is_never_below_mae(self):
        rng = random.Random(1234)
        for _ in range(1000):
            records = []
            for vessel_id in range(1, rng.randint(1, 6) + 1):
                for trajectory_index in range(rng.randint(1, 3)):
                    # Some trajectories err by the same amount everywhere, where RMSE == MAE
                    constant = rng.uniform(0.1, 20.0) if rng.random() < 0.2 else None
                    for segment_index in range(rng.randint(1, 8)):
                        actual = rng.uniform(5.0, 120.0)
                        error = constant * rng.choice([-1, 1]) if constant else rng.gauss(0.0, 0.3 * actual)
                        records.append(
                            record(
                                max(error, 1.0 - actual),
                                actual=actual,
                                vessel_id=vessel_id,
                                trajectory_index=trajectory_index,
                                segment_index=segment_index,
                                displacement=rng.uniform(50.0, 400.0),
                            )
                        )

            report = compute_metrics(records)
            for metrics in filter(None, [report.segment, report.long_segment]):
                assert metrics.rmse_median >= metrics.mae_median * (1 - 1e-12)
                assert metrics.rmse_mean >= metrics.mae_mean * (1 - 1e-12)

    def test_within_fractions(self):
        records = [record(e, segment_index=i) for i, e in enumerate([0.0, 3.0, 6.0, 12.0, 30.0])]
        within = {w.threshold: w.fraction for w in compute_metrics(records).segment.within}
        assert within == {0.05: 0.4, 0.10: 0.6, 0.20: 0.8}

    def test_coverage_and_level_usage(self):
        records = [
            record(1.0),
            record(1.0, segment_index=1, used_fallback=True, reliable=False),
            record(1.0, vessel_id=2),
        ]
        report = compute_metrics(records)

        assert report.segment.coverage == pytest.approx(2 / 3)
        assert report.segment.reliable_fraction == pytest.approx(2 / 3)
        assert report.trajectory.coverage == 0.5
        assert {u.level: u.count for u in report.level_usage} == {PriorityLevel.L1A: 2, PriorityLevel.FALLBACK: 1}

    def test_long_trajectory_slice(self):
        records = [record(1.0, displacement=120.0), record(5.0, vessel_id=2, displacement=150.5)]
        report = compute_metrics(records, EvaluationConfig(long_trajectory_km=150.0))

        assert report.long_segment.trajectories == 1
        assert report.long_segment.mae_median == 5.0

    def test_no_long_trajectories(self):
        report = compute_metrics([record(1.0, displacement=100.0)])
        assert report.long_segment is None
        assert report.long_trajectory is None

    def test_empty(self):
        with pytest.raises(EmptyInputError):
            compute_metrics([])

    def test_report_renderings(self):
        report = compute_metrics([record(3.0), record(4.0, segment_index=1)])
        decoded = json.loads(report.to_json())
        assert decoded["segment"]["mae_median"] == 3.5
        assert any("RMSE median" in line for line in report.lines())

    def test_node_errors(self):
        records = [record(2.0, cell="s00"), record(-4.0, segment_index=1, cell="s00"), record(1.0, vessel_id=2, cell="s01")]
        errors = compute_metrics(records).node_errors
        assert [(n.cell, n.mean_error, n.count) for n in errors] == [("s00", 3.0, 2), ("s01", 1.0, 1)]


class TestExport:
    def test_features(self):
        collection = node_error_features([record(2.0, cell="s00"), record(-4.0, segment_index=1, cell="s00")])

        (feature,) = collection["features"]
        assert feature["properties"]["cell"] == "s00"
        assert feature["properties"]["mean_error"] == 3.0
        ring = feature["geometry"]["coordinates"][0]
        assert ring[0] == ring[-1]
        assert min(lon for lon, _ in ring) == 0.0
        assert max(lat for _, lat in ring) == pytest.approx(1.40625)

    def test_file(self, tmp_path):
        path = tmp_path / "errors.geojson"
        written = export_node_errors([record(1.0, cell="s00"), record(1.0, vessel_id=2, cell="u4p")], path)

        assert written == 2
        document = json.loads(path.read_text(encoding="utf-8"))
        assert document["type"] == "FeatureCollection"
        assert sorted(f["id"] for f in document["features"]) == ["s00", "u4p"]
