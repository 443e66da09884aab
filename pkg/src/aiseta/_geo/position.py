"""Positions and great-circle primitives on a spherical Earth."""

import math
from dataclasses import dataclass

from aiseta.errors import DegenerateBearingError

EARTH_RADIUS_KM = 6371.0088
"""Mean Earth radius used by every distance computation."""

KM_PER_NAUTICAL_MILE = 1.852


def normalize_longitude(lon: float) -> float:
    """Wrap a longitude into [-180, 180)."""
    if -180.0 <= lon < 180.0:
        return lon

    return (lon + 180.0) % 360.0 - 180.0


@dataclass(frozen=True, slots=True)
class Position:
    """A latitude/longitude pair in degrees.

    Longitudes are normalized into [-180, 180) on construction, so 180 and -180
    name the same meridian.
    """

    lat: float
    lon: float

    def __post_init__(self) -> None:
        """Validate the latitude and normalize the longitude."""
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise ValueError(f"Non-finite position ({self.lat}, {self.lon})")

        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"Latitude {self.lat} outside [-90, 90]")

        object.__setattr__(self, "lon", normalize_longitude(self.lon))


def haversine_distance(a: Position, b: Position) -> float:
    """Return the great-circle distance between two positions, in kilometers."""
    lat1, lat2 = math.radians(a.lat), math.radians(b.lat)
    dlat = lat2 - lat1
    dlon = math.radians(b.lon - a.lon)

    h = math.sin(dlat / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2) ** 2
    return 2 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


def initial_bearing(a: Position, b: Position) -> float:
    """Return the initial great-circle bearing from a toward b.

    Args:
        a: The starting position.
        b: The target position.

    Returns:
        Degrees clockwise from true north, in [0, 360).

    Raises:
        DegenerateBearingError: If the positions coincide.
    """
    if a.lat == b.lat and a.lon == b.lon:
        raise DegenerateBearingError(f"No bearing between coincident positions {a}")

    lat1, lat2 = math.radians(a.lat), math.radians(b.lat)
    dlon = math.radians(b.lon - a.lon)

    y = math.sin(dlon) * math.cos(lat2)
    x = math.cos(lat1) * math.sin(lat2) - math.sin(lat1) * math.cos(lat2) * math.cos(dlon)
    bearing = math.degrees(math.atan2(y, x)) % 360.0

    # -0.0 % 360 and tiny negatives can round up to exactly 360
    return 0.0 if bearing >= 360.0 else bearing


def destination_point(origin: Position, bearing: float, distance_km: float) -> Position:
    """Return the position reached by travelling along a great circle.

    Args:
        origin: The starting position.
        bearing: The initial bearing, in degrees clockwise from true north.
        distance_km: The distance to travel, in kilometers.

    Returns:
        The destination position.
    """
    delta = distance_km / EARTH_RADIUS_KM
    theta = math.radians(bearing)
    lat1, lon1 = math.radians(origin.lat), math.radians(origin.lon)

    sin_lat2 = math.sin(lat1) * math.cos(delta) + math.cos(lat1) * math.sin(delta) * math.cos(theta)
    lat2 = math.asin(max(-1.0, min(1.0, sin_lat2)))
    lon2 = lon1 + math.atan2(
        math.sin(theta) * math.sin(delta) * math.cos(lat1),
        math.cos(delta) - math.sin(lat1) * sin_lat2,
    )

    return Position(math.degrees(lat2), math.degrees(lon2))


def knots_to_kmh(speed_kn: float) -> float:
    """Convert a speed in knots to kilometers per hour."""
    return speed_kn * KM_PER_NAUTICAL_MILE


def travel_minutes(distance_km: float, speed_kn: float) -> float:
    """Return the minutes needed to cover a distance at a constant speed."""
    return distance_km / knots_to_kmh(speed_kn) * 60.0
