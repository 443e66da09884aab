"""Standard base-32 geohash encoding and decoding."""

from dataclasses import dataclass

from aiseta.errors import InvalidGeohashError

from .position import Position, normalize_longitude

BASE32 = "0123456789bcdefghjkmnpqrstuvwxyz"
"""The geohash alphabet."""

_DECODE_MAP = {char: index for index, char in enumerate(BASE32)}


@dataclass(frozen=True, slots=True)
class BoundingBox:
    """The latitude/longitude box covered by a geohash cell."""

    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float

    @property
    def center(self) -> Position:
        """The midpoint of the box."""
        return Position(
            (self.lat_min + self.lat_max) / 2, (self.lon_min + self.lon_max) / 2
        )

    def contains(self, position: Position) -> bool:
        """Return True if the position lies inside the (closed) box."""
        return (
            self.lat_min <= position.lat <= self.lat_max
            and self.lon_min <= position.lon <= self.lon_max
        )

    def ring(self) -> list[tuple[float, float]]:
        """Return the box corners as a closed counter-clockwise (lon, lat) ring."""
        return [
            (self.lon_min, self.lat_min),
            (self.lon_max, self.lat_min),
            (self.lon_max, self.lat_max),
            (self.lon_min, self.lat_max),
            (self.lon_min, self.lat_min),
        ]


def geohash_encode(position: Position, precision: int = 3) -> str:
    """Encode a position as a geohash.

    Bits alternate between longitude and latitude bisections, starting with
    longitude, and every five bits produce one output character.

    Args:
        position: The position to encode.
        precision: The number of output characters.

    Returns:
        The geohash string.
    """
    if precision < 1:
        raise ValueError(f"Geohash precision must be positive, got {precision}")

    lat, lon = position.lat, normalize_longitude(position.lon)
    lat_lo, lat_hi = -90.0, 90.0
    lon_lo, lon_hi = -180.0, 180.0

    chars: list[str] = []
    bits = 0
    bit_count = 0
    even = True

    while len(chars) < precision:
        if even:
            mid = (lon_lo + lon_hi) / 2
            if lon >= mid:
                bits = (bits << 1) | 1
                lon_lo = mid
            else:
                bits <<= 1
                lon_hi = mid
        else:
            mid = (lat_lo + lat_hi) / 2
            if lat >= mid:
                bits = (bits << 1) | 1
                lat_lo = mid
            else:
                bits <<= 1
                lat_hi = mid

        even = not even
        bit_count += 1
        if bit_count == 5:
            chars.append(BASE32[bits])
            bits = 0
            bit_count = 0

    return "".join(chars)


def geohash_decode_bbox(code: str) -> BoundingBox:
    """Decode a geohash into the bounding box it names.

    Args:
        code: The geohash string.

    Returns:
        The exact box implied by the encoded bits.

    Raises:
        InvalidGeohashError: If the string is empty or has characters outside the alphabet.
    """
    if not code:
        raise InvalidGeohashError("Empty geohash")

    lat_lo, lat_hi = -90.0, 90.0
    lon_lo, lon_hi = -180.0, 180.0
    even = True

    for char in code:
        value = _DECODE_MAP.get(char)
        if value is None:
            raise InvalidGeohashError(f"Invalid geohash character {char!r} in {code!r}")

        for shift in range(4, -1, -1):
            bit = (value >> shift) & 1
            if even:
                mid = (lon_lo + lon_hi) / 2
                if bit:
                    lon_lo = mid
                else:
                    lon_hi = mid
            else:
                mid = (lat_lo + lat_hi) / 2
                if bit:
                    lat_lo = mid
                else:
                    lat_hi = mid
            even = not even

    return BoundingBox(lat_lo, lat_hi, lon_lo, lon_hi)


def geohash_center(code: str) -> Position:
    """Return the center of a geohash cell."""
    return geohash_decode_bbox(code).center


def is_geohash(code: str, precision: int | None = None) -> bool:
    """Return True if the string is a valid geohash (of the given precision)."""
    if not code or (precision is not None and len(code) != precision):
        return False

    return all(char in _DECODE_MAP for char in code)
