"""Eight-way compass quantization of bearings."""

from enum import Enum


class CompassDirection(Enum):
    """Direction of travel, one 45 degree sector per value."""

    N = "N"
    NE = "NE"
    E = "E"
    SE = "SE"
    S = "S"
    SW = "SW"
    W = "W"
    NW = "NW"

    @property
    def index(self) -> int:
        """The sector index, clockwise from north (N = 0)."""
        return _INDEX[self]


_ORDER = tuple(CompassDirection)
_INDEX = {direction: index for index, direction in enumerate(_ORDER)}


def quantize_direction(bearing: float) -> CompassDirection:
    """Map a bearing to the compass sector centered nearest to it.

    Sectors are half-open, spanning [center - 22.5, center + 22.5). A boundary
    bearing belongs to the sector above it, so 22.5 is NE and 337.5 is N.

    Args:
        bearing: Degrees clockwise from true north.

    Returns:
        The compass direction.
    """
    shifted = (bearing + 22.5) % 360.0
    return _ORDER[int(shifted // 45.0) % 8]
