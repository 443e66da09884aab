"""AIS dynamic messages and their ingestion into per-vessel streams.

Input files are delimiter-separated text with a header row naming the columns
`vessel_id,timestamp_utc,lat,lon,sog_knots,ship_type`. Timestamps may be epoch
seconds or ISO-8601 strings, and files ending in `.gz` are decompressed on the fly.
"""

from ._ais.ingest import (
    COLUMNS,
    IngestReport,
    IngestResult,
    ingest,
    streams_from_messages,
)
from ._ais.message import AisMessage, ShipClass, VesselStream, classify_ship_type
from ._ais.query import QuerySet

__all__ = [
    "COLUMNS",
    "AisMessage",
    "IngestReport",
    "IngestResult",
    "QuerySet",
    "ShipClass",
    "VesselStream",
    "classify_ship_type",
    "ingest",
    "streams_from_messages",
]
