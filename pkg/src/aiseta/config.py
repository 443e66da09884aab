"""Run configuration.

Every tunable of the pipeline lives here, with defaults equal to the published
method's constants. Configurations are plain dataclasses and load from and echo to
JSON documents, so a run can be reproduced from its echoed configuration.
"""

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from aiseta import _json
from aiseta._ais.message import ShipClass
from aiseta._estimator.levels import PriorityLevel


class FitUnit(Enum):
    """What each mixture-model observation represents."""

    VESSEL = "vessel"
    """One feature vector per vessel (mean of its sub-trajectory summaries)."""

    TRAJECTORY = "trajectory"
    """One feature vector per sub-trajectory, vessels labelled by majority vote."""


class CountBasis(Enum):
    """What the reliability threshold counts."""

    SAMPLES = "samples"
    """Speed-over-ground samples recorded into a stratum."""

    RUNS = "runs"
    """Cell runs flushed into a stratum."""


@dataclass(kw_only=True)
class SegmentationConfig:
    """Gap splitting, speed filtering and eligibility thresholds."""

    max_gap_minutes: float = 90.0
    min_speed_kn: float = 3.0
    max_speed_kn: float = 50.0
    min_messages: int = 10
    min_time_span_minutes: float = 30.0
    min_displacement_km: float = 100.0
    regap_after_filter: bool = False
    """Re-apply the gap rule to the speed-filtered messages."""


@dataclass(kw_only=True)
class SelectionConfig:
    """Transmitter selection mixture-model settings."""

    enabled: bool = True
    components: int = 2
    seed: int = 0
    max_iter: int = 200
    tol: float = 1e-6
    covariance_floor: float = 1e-6
    fit_unit: FitUnit = FitUnit.VESSEL


@dataclass(kw_only=True)
class GraphConfig:
    """Knowledge graph construction settings."""

    precision: int = 3
    record_final_run: bool = True
    """Record the last cell run of each sub-trajectory into its node."""


@dataclass(kw_only=True)
class FallbackSpeeds:
    """Standard speeds per vessel class, used when a cell has no history."""

    cargo: float = 14.0
    tanker: float = 12.5
    other: float = 12.0

    def __post_init__(self) -> None:
        """Reject non-positive speeds."""
        if min(self.cargo, self.tanker, self.other) <= 0:
            raise ValueError("Fallback speeds must be positive")

    def for_class(self, ship_class: ShipClass) -> float:
        """Return the fallback speed for a vessel class, in knots."""
        if ship_class is ShipClass.CARGO:
            return self.cargo
        if ship_class is ShipClass.TANKER:
            return self.tanker
        return self.other


@dataclass(kw_only=True)
class EstimatorConfig:
    """Priority-based speed estimation settings."""

    reliability_threshold: int = 8
    count_basis: CountBasis = CountBasis.SAMPLES
    fallback: FallbackSpeeds = field(default_factory=FallbackSpeeds)
    levels: list[PriorityLevel] = field(default_factory=list)
    """Restrict lookups to these levels, all levels when empty."""

    snap_radius_km: float = 250.0
    """How far a query position may be from the nearest node in non-strict routing."""

    def enabled_levels(self) -> tuple[PriorityLevel, ...]:
        """Return the lookup levels to scan, in priority order."""
        if not self.levels:
            return PriorityLevel.lookup_order()
        return tuple(level for level in PriorityLevel.lookup_order() if level in self.levels)


@dataclass(kw_only=True)
class SplitConfig:
    """Chronological train/test split."""

    held_out_days: int = 7
    """The last N calendar days of every month are held out for testing."""


@dataclass(kw_only=True)
class EvaluationConfig:
    """Metric settings."""

    long_trajectory_km: float = 150.0
    within_fractions: list[float] = field(default_factory=lambda: [0.05, 0.10, 0.20])


@dataclass(kw_only=True)
class RunConfig:
    """All pipeline tunables."""

    segmentation: SegmentationConfig = field(default_factory=SegmentationConfig)
    selection: SelectionConfig = field(default_factory=SelectionConfig)
    graph: GraphConfig = field(default_factory=GraphConfig)
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    split: SplitConfig = field(default_factory=SplitConfig)
    evaluation: EvaluationConfig = field(default_factory=EvaluationConfig)

    def to_json(self) -> str:
        """Render the configuration as a single-line JSON document."""
        return _json.render(self)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        """Parse a configuration from a JSON document."""
        return _json.parse(text, cls)

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        """Load a configuration file."""
        return _json.read(path, cls)
