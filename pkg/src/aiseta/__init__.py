"""Historical knowledge graph of vessel speeds for maritime travel-time estimation."""

import datetime as dt
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

from ._logger import logger
from .ais import IngestResult, ShipClass, VesselStream, ingest
from .config import RunConfig
from .errors import AisEtaError, DegenerateDataError
from .estimator import Prediction, find_route, predict_segments
from .evaluation import (
    MetricsReport,
    SegmentRecord,
    check_leakage,
    compute_metrics,
    evaluate_segments,
    temporal_split,
)
from .geo import Position
from .knowledge_graph import KnowledgeGraph, build_graph
from .segmentation import SubTrajectory, segment_streams
from .transmitters import GmmModel, TransmitterLabel, label_all_primary, select_transmitters

__all__ = ["AisEtaError", "Pipeline", "PipelineResult", "RunConfig", "logger"]


@dataclass(frozen=True)
class PipelineResult:
    """Artifacts of a full train/test run."""

    graph: KnowledgeGraph
    labels: dict[int, TransmitterLabel]
    records: list[SegmentRecord]
    report: MetricsReport


class Pipeline:
    """Main entry point for building and querying a speed knowledge graph.

    The Pipeline owns one run configuration and exposes every stage, from raw
    message files to travel-time predictions, as a method.
    """

    def __init__(self, config: RunConfig | None = None, *, jobs: int = 1) -> None:
        """Initialize the pipeline.

        Args:
            config: The run configuration, defaults for every omitted setting.
            jobs: Worker processes used by the parallel stages.
        """
        self._config = config or RunConfig()
        self._jobs = jobs

    @property
    def config(self) -> RunConfig:
        """The run configuration."""
        return self._config

    @property
    def jobs(self) -> int:
        """Worker processes used by the parallel stages."""
        return self._jobs

    def ingest(self, *sources: str | Path) -> IngestResult:
        """Read message files into vessel streams."""
        return ingest(*sources)

    def segment(self, streams: Iterable[VesselStream]) -> list[SubTrajectory]:
        """Cut vessel streams into eligible sub-trajectories."""
        return segment_streams(streams, self._config.segmentation, jobs=self._jobs)

    def split(
        self, trajectories: Iterable[SubTrajectory]
    ) -> tuple[list[SubTrajectory], list[SubTrajectory]]:
        """Split sub-trajectories into training and test sets."""
        return temporal_split(trajectories, self._config.split)

    def select(
        self,
        trajectories: Sequence[SubTrajectory],
        *,
        fit_on: Sequence[SubTrajectory] | None = None,
    ) -> tuple[GmmModel | None, dict[int, TransmitterLabel]]:
        """Label every vessel as a primary or secondary transmitter.

        When selection is disabled, or the data is too degenerate to fit the
        mixture, every vessel is primary and no model is returned.
        """
        selection = self._config.selection
        if not selection.enabled:
            return None, {label.vessel_id: label for label in label_all_primary(trajectories)}

        try:
            model, labels = select_transmitters(trajectories, selection, fit_on=fit_on)
        except DegenerateDataError as exc:
            logger.warning("Transmitter selection skipped, labelling every vessel primary: %s", exc)
            return None, {label.vessel_id: label for label in label_all_primary(trajectories)}

        return model, {label.vessel_id: label for label in labels}

    def build_graph(
        self,
        trajectories: Iterable[SubTrajectory],
        labels: dict[int, TransmitterLabel] | None = None,
        *,
        held_out: bool = True,
    ) -> KnowledgeGraph:
        """Build a graph from training sub-trajectories.

        Args:
            trajectories: The training sub-trajectories.
            labels: Transmitter labels, only primary transmitters are used when given.
            held_out: Check the trajectories against the held-out window of the split.
        """
        return build_graph(
            trajectories,
            self._config.graph,
            labels=labels,
            held_out_days=self._config.split.held_out_days if held_out else None,
            jobs=self._jobs,
        )

    def evaluate(
        self,
        graph: KnowledgeGraph,
        test: Sequence[SubTrajectory],
        labels: dict[int, TransmitterLabel] | None = None,
        *,
        held_out: bool = True,
    ) -> tuple[list[SegmentRecord], MetricsReport]:
        """Replay test sub-trajectories against a graph and compute metrics.

        Args:
            graph: The graph, built from training data.
            test: The test sub-trajectories.
            labels: Transmitter labels, only primary transmitters are evaluated when given.
            held_out: Verify the graph and test set follow the chronological split.
                Turn off to evaluate against an external dataset.
        """
        if held_out:
            check_leakage(graph, test, self._config.split.held_out_days)

        records = evaluate_segments(
            graph, test, self._config.estimator, labels=labels, jobs=self._jobs
        )
        return records, compute_metrics(records, self._config.evaluation)

    def predict(
        self,
        graph: KnowledgeGraph,
        origin: Position,
        destination: Position,
        ship_class: ShipClass,
        departure: dt.datetime,
        *,
        strict: bool = False,
    ) -> Prediction:
        """Route between two positions and predict the travel time."""
        estimator = self._config.estimator
        route = find_route(
            graph,
            origin,
            destination,
            strict=strict,
            snap_radius_km=estimator.snap_radius_km,
        )
        return predict_segments(
            graph, route, ship_class, departure.timestamp(), estimator, strict=strict
        )

    def run(self, *sources: str | Path) -> PipelineResult:
        """Run every stage: ingest, segment, split, select, build and evaluate.

        The transmitter model is fitted on the training split only and then applied
        to every vessel.
        """
        streams = self.ingest(*sources).streams
        trajectories = self.segment(streams)
        train, test = self.split(trajectories)
        _, labels = self.select(trajectories, fit_on=train)
        graph = self.build_graph(train, labels)
        records, report = self.evaluate(graph, test, labels)
        return PipelineResult(graph, labels, records, report)
