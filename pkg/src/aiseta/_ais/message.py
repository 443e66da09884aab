"""AIS dynamic message data model."""

import datetime as dt
import math
from dataclasses import dataclass
from enum import Enum

from aiseta._geo.position import Position


class ShipClass(Enum):
    """Coarse vessel class used to stratify speed statistics."""

    CARGO = "cargo"
    TANKER = "tanker"
    OTHER = "other"


def classify_ship_type(code: int | None) -> ShipClass:
    """Map a raw AIS ship type code to a vessel class.

    Codes 70-79 are cargo ships and 80-89 are tankers; everything else,
    including a missing code, is "other".
    """
    if code is None:
        return ShipClass.OTHER

    if 70 <= code <= 79:
        return ShipClass.CARGO

    if 80 <= code <= 89:
        return ShipClass.TANKER

    return ShipClass.OTHER


@dataclass(frozen=True, slots=True)
class AisMessage:
    """One decoded dynamic AIS report."""

    vessel_id: int
    """MMSI-like vessel identifier."""

    timestamp: float
    """UTC seconds since the epoch."""

    position: Position

    sog: float
    """Speed over ground, in knots."""

    ship_type_code: int | None = None
    """Raw AIS ship type (0-99), None if unknown."""

    def __post_init__(self) -> None:
        """Validate the message invariants."""
        if not (math.isfinite(self.timestamp) and self.timestamp > 0):
            raise ValueError(f"Invalid timestamp {self.timestamp}")

        if not (math.isfinite(self.sog) and self.sog >= 0):
            raise ValueError(f"Invalid speed over ground {self.sog}")

    @property
    def time(self) -> dt.datetime:
        """The message time as an aware UTC datetime."""
        return dt.datetime.fromtimestamp(self.timestamp, dt.timezone.utc)


@dataclass(frozen=True, slots=True)
class VesselStream:
    """All messages of one vessel, sorted ascending by timestamp."""

    vessel_id: int
    messages: tuple[AisMessage, ...]
    ship_class: ShipClass

    def __len__(self) -> int:
        """Return the number of messages in the stream."""
        return len(self.messages)
