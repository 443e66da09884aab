"""Synthetic AIS worlds with known ground truth.

Fleets sail great-circle routes under a parameterized speed law with optional
Gaussian noise, reporting at fixed intervals. The generator writes an ingestible
message file and a truth sidecar listing every simulated cell run.
"""

from ._synth.generate import (
    SyntheticWorld,
    TruthRun,
    generate,
    load_truth,
    messages_frame,
    simulate_vessel,
    write_world,
)
from ._synth.world import (
    ClassOffset,
    DirectionSpeed,
    FleetSpec,
    GapInjection,
    SpeedLaw,
    SpeedLawSpec,
    Waypoint,
    WorldSpec,
    load_world,
    validate_world,
)

__all__ = [
    "ClassOffset",
    "DirectionSpeed",
    "FleetSpec",
    "GapInjection",
    "SpeedLaw",
    "SpeedLawSpec",
    "SyntheticWorld",
    "TruthRun",
    "Waypoint",
    "WorldSpec",
    "generate",
    "load_truth",
    "load_world",
    "messages_frame",
    "simulate_vessel",
    "validate_world",
    "write_world",
]
