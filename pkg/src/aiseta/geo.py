"""Geodesic primitives and geohash spatial indexing.

Distances use a spherical Earth with the mean radius, which is accurate enough at
the scale of a precision-3 geohash cell (roughly 156 km on a side at the equator).
"""

from ._geo.direction import CompassDirection, quantize_direction
from ._geo.geohash import (
    BASE32,
    BoundingBox,
    geohash_center,
    geohash_decode_bbox,
    geohash_encode,
    is_geohash,
)
from ._geo.position import (
    EARTH_RADIUS_KM,
    KM_PER_NAUTICAL_MILE,
    Position,
    destination_point,
    haversine_distance,
    initial_bearing,
    knots_to_kmh,
    normalize_longitude,
    travel_minutes,
)

__all__ = [
    "BASE32",
    "EARTH_RADIUS_KM",
    "KM_PER_NAUTICAL_MILE",
    "BoundingBox",
    "CompassDirection",
    "Position",
    "destination_point",
    "geohash_center",
    "geohash_decode_bbox",
    "geohash_encode",
    "haversine_distance",
    "initial_bearing",
    "is_geohash",
    "knots_to_kmh",
    "normalize_longitude",
    "quantize_direction",
    "travel_minutes",
]
