"""Declarative description of a synthetic AIS world."""

import datetime as dt
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from aiseta import _json
from aiseta._ais.message import ShipClass
from aiseta._geo.direction import CompassDirection
from aiseta._geo.position import Position
from aiseta.errors import InvalidSpecError, MalformedRecordError

MIN_SPEED_KN = 3.0
MAX_SPEED_KN = 50.0

DATETIME_FORMAT = "%Y-%m-%dT%H:%M:%S%z"

_DEFAULT_SHIP_TYPES = {ShipClass.CARGO: 70, ShipClass.TANKER: 80, ShipClass.OTHER: 60}


class SpeedLaw(Enum):
    """How a fleet's speed depends on its context."""

    CONSTANT = "constant"
    """Always the base speed."""

    HOUR_STEP = "hour_step"
    """The base speed by day, `night_speed` outside [day_start_hour, day_end_hour)."""

    DIRECTION_STEP = "direction_step"
    """A listed speed per direction of travel, the base speed otherwise."""

    CLASS_OFFSET = "class_offset"
    """The base speed plus a listed offset per vessel class."""


@dataclass(kw_only=True)
class DirectionSpeed:
    """Speed override for one direction of travel."""

    direction: CompassDirection
    speed: float


@dataclass(kw_only=True)
class ClassOffset:
    """Speed offset for one vessel class."""

    ship_class: ShipClass
    offset: float


@dataclass(kw_only=True)
class SpeedLawSpec:
    """A speed law and its parameters."""

    kind: SpeedLaw = SpeedLaw.CONSTANT
    night_speed: float = 10.0
    day_start_hour: int = 6
    day_end_hour: int = 18
    direction_speeds: list[DirectionSpeed] = field(default_factory=list)
    class_offsets: list[ClassOffset] = field(default_factory=list)

    def speed(
        self, base: float, hour: int, direction: CompassDirection, ship_class: ShipClass
    ) -> float:
        """Evaluate the noise-free law, in knots."""
        if self.kind is SpeedLaw.HOUR_STEP:
            return base if self.day_start_hour <= hour < self.day_end_hour else self.night_speed

        if self.kind is SpeedLaw.DIRECTION_STEP:
            for entry in self.direction_speeds:
                if entry.direction is direction:
                    return entry.speed
            return base

        if self.kind is SpeedLaw.CLASS_OFFSET:
            for entry in self.class_offsets:
                if entry.ship_class is ship_class:
                    return base + entry.offset
            return base

        return base


@dataclass(kw_only=True)
class Waypoint:
    """A route waypoint."""

    lat: float
    lon: float

    @property
    def position(self) -> Position:
        """The waypoint as a position."""
        return Position(self.lat, self.lon)


@dataclass(kw_only=True)
class GapInjection:
    """A reporting outage starting once a vessel has covered `fraction` of its route."""

    fraction: float
    minutes: float


@dataclass(kw_only=True)
class FleetSpec:
    """Identical vessels sailing one route."""

    ship_class: ShipClass
    ship_type: int | None = None
    """AIS ship type code to report, a typical code of the class by default."""

    count: int
    route: list[Waypoint] = field(default_factory=list)
    base_speed: float
    law: SpeedLawSpec = field(default_factory=SpeedLawSpec)
    noise_sd: float = 0.0
    """Standard deviation of Gaussian speed noise, in knots."""

    report_interval: float = 5.0
    """Minutes between messages, a whole number of seconds."""

    gaps: list[GapInjection] = field(default_factory=list)
    trips: int = 1
    """Trips per vessel, spread evenly over the world's time range."""

    round_trip: bool = False
    """Sail every other trip in reverse."""

    @property
    def type_code(self) -> int:
        """The AIS ship type code reported by the fleet."""
        return self.ship_type if self.ship_type is not None else _DEFAULT_SHIP_TYPES[self.ship_class]


@dataclass(kw_only=True)
class WorldSpec:
    """Everything needed to generate a synthetic world deterministically."""

    seed: int = 0
    start: dt.datetime = field(metadata={"format": DATETIME_FORMAT})
    end: dt.datetime = field(metadata={"format": DATETIME_FORMAT})
    precision: int = 3
    """Geohash precision of the truth sidecar's cell runs."""

    first_vessel_id: int = 211_000_001
    fleets: list[FleetSpec] = field(default_factory=list)

    @property
    def start_timestamp(self) -> float:
        """UTC epoch seconds of the start of the time range."""
        return self.start.timestamp()

    @property
    def end_timestamp(self) -> float:
        """UTC epoch seconds of the end of the time range."""
        return self.end.timestamp()

    def vessel_ids(self, fleet_index: int) -> range:
        """Return the vessel IDs of one fleet."""
        first = self.first_vessel_id + sum(f.count for f in self.fleets[:fleet_index])
        return range(first, first + self.fleets[fleet_index].count)

    def to_json(self) -> str:
        """Render the spec as a single-line JSON document."""
        return _json.render(self)


def validate_world(spec: WorldSpec) -> WorldSpec:
    """Check a world spec.

    Raises:
        InvalidSpecError: If any parameter is out of range.
    """
    if spec.start.tzinfo is None or spec.end.tzinfo is None:
        raise InvalidSpecError("start and end must carry a UTC offset")
    if spec.end <= spec.start:
        raise InvalidSpecError("end must be after start")
    if not 1 <= spec.precision <= 12:
        raise InvalidSpecError(f"Invalid geohash precision {spec.precision}")
    if not spec.fleets:
        raise InvalidSpecError("A world needs at least one fleet")

    for i, fleet in enumerate(spec.fleets):
        where = f"fleet {i}"
        if fleet.count < 0 or fleet.trips < 1:
            raise InvalidSpecError(f"{where}: count must be >= 0 and trips >= 1")
        if not MIN_SPEED_KN <= fleet.base_speed <= MAX_SPEED_KN:
            raise InvalidSpecError(f"{where}: base speed {fleet.base_speed} outside [3, 50] kn")
        if fleet.report_interval <= 0:
            raise InvalidSpecError(f"{where}: report interval must be positive")
        # Message files carry whole-second timestamps
        if not (fleet.report_interval * 60.0).is_integer():
            raise InvalidSpecError(f"{where}: report interval must be whole seconds")
        if fleet.noise_sd < 0:
            raise InvalidSpecError(f"{where}: noise must be non-negative")
        if fleet.ship_type is not None and not 0 <= fleet.ship_type <= 99:
            raise InvalidSpecError(f"{where}: ship type {fleet.ship_type} outside 0-99")
        if len(fleet.route) < 2:
            raise InvalidSpecError(f"{where}: a route needs at least two waypoints")

        try:
            positions = [w.position for w in fleet.route]
        except ValueError as exc:
            raise InvalidSpecError(f"{where}: {exc}") from exc
        if any(a == b for a, b in zip(positions, positions[1:])):
            raise InvalidSpecError(f"{where}: consecutive waypoints coincide")

        for gap in fleet.gaps:
            if not 0.0 <= gap.fraction <= 1.0 or gap.minutes <= 0:
                raise InvalidSpecError(f"{where}: invalid gap {gap}")

        law = fleet.law
        if not (0 <= law.day_start_hour <= 24 and 0 <= law.day_end_hour <= 24):
            raise InvalidSpecError(f"{where}: day hours outside 0-24")
        speeds = [law.night_speed, *(d.speed for d in law.direction_speeds)]
        if min(speeds) <= 0:
            raise InvalidSpecError(f"{where}: law speeds must be positive")

    return spec


def load_world(path: str | Path) -> WorldSpec:
    """Load and validate a world spec file.

    Raises:
        InvalidSpecError: If the file is malformed or out of range.
    """
    try:
        spec = _json.read(path, WorldSpec)
    except MalformedRecordError as exc:
        raise InvalidSpecError(str(exc)) from exc
    except OSError as exc:
        raise InvalidSpecError(f"Cannot read {path}: {exc}") from exc

    return validate_world(spec)
