"""Deterministic synthetic fleet simulation with ground truth."""

import datetime as dt
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from aiseta import _json
from aiseta._ais.ingest import COLUMNS
from aiseta._ais.message import AisMessage
from aiseta._geo.direction import quantize_direction
from aiseta._geo.geohash import geohash_encode
from aiseta._geo.position import (
    Position,
    destination_point,
    haversine_distance,
    initial_bearing,
    knots_to_kmh,
)
from aiseta._logger import logger
from aiseta._parallel import map_ordered

from .world import MAX_SPEED_KN, MIN_SPEED_KN, FleetSpec, WorldSpec, validate_world

# Trips of one vessel are kept this far apart so they never share a sub-trajectory
TRIP_SEPARATION = 180 * 60.0


@dataclass(kw_only=True)
class TruthRun:
    """The simulated passage of one vessel through one cell."""

    vessel_id: int
    trip: int
    cell: str
    entry_timestamp: float
    exit_timestamp: float
    mean_speed: float
    """Mean simulated speed, noise included, in knots."""

    law_speed: float
    """Mean noise-free law speed, in knots."""

    steps: int


@dataclass(frozen=True)
class SyntheticWorld:
    """Generated messages, sorted by (timestamp, vessel_id), and their ground truth."""

    messages: tuple[AisMessage, ...]
    truth: tuple[TruthRun, ...]


@dataclass(frozen=True, slots=True)
class _Step:
    timestamp: float
    position: Position
    speed: float
    law_speed: float
    reported: bool


@dataclass(frozen=True, slots=True)
class _VesselJob:
    vessel_id: int
    fleet_index: int
    vessel_index: int
    fleet: FleetSpec
    seed: int
    start: float
    end: float
    precision: int


def _simulate_trip(
    fleet: FleetSpec,
    route: list[Position],
    departure: float,
    rng: np.random.Generator,
) -> list[_Step]:
    """Sail a route at fixed reporting intervals, stopping before the final overshoot."""
    interval = fleet.report_interval * 60.0
    legs = [haversine_distance(a, b) for a, b in zip(route, route[1:])]
    total = math.fsum(legs)

    gaps = sorted((g.fraction, g.minutes * 60.0) for g in fleet.gaps)
    silent_until = -math.inf

    steps: list[_Step] = []
    position, target, travelled, clock = route[0], 1, 0.0, departure
    while True:
        direction = quantize_direction(initial_bearing(position, route[target]))
        hour = dt.datetime.fromtimestamp(clock, dt.timezone.utc).hour
        law_speed = fleet.law.speed(fleet.base_speed, hour, direction, fleet.ship_class)
        speed = law_speed
        if fleet.noise_sd > 0:
            speed += rng.normal(0.0, fleet.noise_sd)
        speed = min(MAX_SPEED_KN, max(MIN_SPEED_KN, speed))

        while gaps and travelled >= gaps[0][0] * total:
            silent_until = max(silent_until, clock + gaps.pop(0)[1])

        steps.append(_Step(clock, position, speed, law_speed, clock >= silent_until))

        distance = knots_to_kmh(speed) * interval / 3600.0
        remaining = haversine_distance(position, route[target]) + math.fsum(legs[target:])
        if distance > remaining:
            break

        # Advance along the legs, turning at every waypoint reached
        travelled += distance
        while distance > 0.0:
            to_waypoint = haversine_distance(position, route[target])
            if to_waypoint <= distance:
                position = route[target]
                distance -= to_waypoint
                target += 1
                if target == len(route):
                    break
            else:
                position = destination_point(
                    position, initial_bearing(position, route[target]), distance
                )
                distance = 0.0

        clock += interval
        if target == len(route):
            steps.append(_Step(clock, position, speed, law_speed, clock >= silent_until))
            break

    return steps


def _truth_runs(job: _VesselJob, trip: int, steps: list[_Step]) -> list[TruthRun]:
    runs: list[TruthRun] = []
    group: list[_Step] = []
    cell = ""
    for step in [*steps, None]:
        step_cell = geohash_encode(step.position, job.precision) if step else None
        if group and step_cell != cell:
            runs.append(
                TruthRun(
                    vessel_id=job.vessel_id,
                    trip=trip,
                    cell=cell,
                    entry_timestamp=group[0].timestamp,
                    exit_timestamp=group[-1].timestamp,
                    mean_speed=math.fsum(s.speed for s in group) / len(group),
                    law_speed=math.fsum(s.law_speed for s in group) / len(group),
                    steps=len(group),
                )
            )
            group = []
        if step is not None and step_cell is not None:
            cell = step_cell
            group.append(step)

    return runs


def simulate_vessel(job: _VesselJob) -> tuple[list[AisMessage], list[TruthRun]]:
    """Simulate every trip of one vessel with its own random stream."""
    fleet = job.fleet
    rng = np.random.default_rng([job.seed, job.fleet_index, job.vessel_index])
    route = [w.position for w in fleet.route]
    window = (job.end - job.start) / fleet.trips

    messages: list[AisMessage] = []
    truth: list[TruthRun] = []
    earliest = job.start
    for trip in range(fleet.trips):
        sampled = job.start + trip * window + float(rng.uniform(0.0, window))
        departure = float(math.floor(max(sampled, earliest)))
        trip_route = route[::-1] if fleet.round_trip and trip % 2 else route

        steps = _simulate_trip(fleet, trip_route, departure, rng)
        messages.extend(
            AisMessage(
                vessel_id=job.vessel_id,
                timestamp=step.timestamp,
                position=step.position,
                sog=step.speed,
                ship_type_code=fleet.type_code,
            )
            for step in steps
            if step.reported
        )
        truth.extend(_truth_runs(job, trip, steps))
        earliest = steps[-1].timestamp + TRIP_SEPARATION

    return messages, truth


def generate(spec: WorldSpec, *, jobs: int = 1) -> SyntheticWorld:
    """Generate a synthetic world.

    Every vessel draws from its own generator seeded by (seed, fleet, vessel), so the
    output is identical for a given spec regardless of the number of workers.

    Raises:
        InvalidSpecError: If the spec is invalid.
    """
    validate_world(spec)

    work = [
        _VesselJob(
            vessel_id=vessel_id,
            fleet_index=fleet_index,
            vessel_index=vessel_index,
            fleet=fleet,
            seed=spec.seed,
            start=spec.start_timestamp,
            end=spec.end_timestamp,
            precision=spec.precision,
        )
        for fleet_index, fleet in enumerate(spec.fleets)
        for vessel_index, vessel_id in enumerate(spec.vessel_ids(fleet_index))
    ]
    results = map_ordered(simulate_vessel, work, jobs)

    messages = sorted(
        (m for vessel_messages, _ in results for m in vessel_messages),
        key=lambda m: (m.timestamp, m.vessel_id),
    )
    truth = [run for _, vessel_truth in results for run in vessel_truth]

    logger.info("Generated %d messages from %d vessels", len(messages), len(work))
    return SyntheticWorld(tuple(messages), tuple(truth))


def messages_frame(messages: tuple[AisMessage, ...] | list[AisMessage]) -> pd.DataFrame:
    """Lay messages out in the ingest column format."""
    frame = pd.DataFrame(
        {
            "vessel_id": [m.vessel_id for m in messages],
            "timestamp_utc": pd.to_datetime(
                [m.timestamp for m in messages], unit="s", utc=True
            ).strftime("%Y-%m-%dT%H:%M:%SZ"),
            "lat": [m.position.lat for m in messages],
            "lon": [m.position.lon for m in messages],
            "sog_knots": [m.sog for m in messages],
            "ship_type": pd.array(
                [m.ship_type_code for m in messages], dtype="Int64"
            ),
        },
        columns=list(COLUMNS),
    )
    return frame


def write_world(world: SyntheticWorld, out_dir: str | Path) -> tuple[Path, Path]:
    """Write the messages as CSV and the truth as JSON lines.

    Returns:
        The paths of the message file and the truth sidecar.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    messages_path = out / "messages.csv"
    messages_frame(world.messages).to_csv(messages_path, index=False)

    truth_path = out / "truth.jsonl"
    with open(truth_path, "w", encoding="utf-8") as f:
        for run in world.truth:
            f.write(_json.render(run))
            f.write("\n")

    logger.info("Wrote %d messages to %s", len(world.messages), messages_path)
    return messages_path, truth_path


def load_truth(path: str | Path) -> list[TruthRun]:
    """Read a truth sidecar."""
    with open(path, encoding="utf-8") as f:
        return [_json.parse(line, TruthRun) for line in f if line.strip()]
