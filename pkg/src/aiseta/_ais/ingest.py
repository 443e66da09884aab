"""Streaming ingestion of delimiter-separated AIS message files."""

import math
from collections import defaultdict
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import numpy.typing as npt
import pandas as pd

from aiseta._geo.position import Position
from aiseta._logger import logger
from aiseta.errors import UnreadableSourceError

from .message import AisMessage, VesselStream, classify_ship_type
from .query import QuerySet

COLUMNS = ("vessel_id", "timestamp_utc", "lat", "lon", "sog_knots", "ship_type")
"""Required input columns, in canonical order."""

DEFAULT_CHUNK_SIZE = 250_000

# Buffered row layout: timestamp, lat, lon, sog, ship type code (NaN if unknown)
_TS, _LAT, _LON, _SOG, _CODE = range(5)

FloatArray = npt.NDArray[np.float64]


@dataclass(kw_only=True)
class IngestReport:
    """Counts gathered while ingesting message files."""

    records: int = 0
    """Data rows read, excluding headers."""

    vessels: int = 0
    messages: int = 0
    """Messages kept after validation and de-duplication."""

    malformed: int = 0
    """Rows dropped, including duplicates, so records == messages + malformed."""

    duplicates: int = 0
    """Rows dropped because their vessel already reported at that timestamp."""

    files: dict[str, int] = field(default_factory=dict)
    """Data rows read per source file."""

    def lines(self) -> list[str]:
        """Return the report as line-oriented text."""
        return [
            f"records {self.records}",
            f"vessels {self.vessels}",
            f"messages {self.messages}",
            f"malformed {self.malformed}",
            f"duplicates {self.duplicates}",
        ]


@dataclass(frozen=True)
class IngestResult:
    """Vessel streams and the report of the ingest that produced them."""

    streams: QuerySet[int, VesselStream]
    report: IngestReport


def _read_chunks(
    source: Path, chunk_size: int, on_bad_line: Callable[[list[str]], None]
) -> Iterator[pd.DataFrame]:
    # Compression is inferred from the suffix, so "*.csv.gz" works transparently.
    # Only the python engine hands over-long rows to a callable instead of failing.
    try:
        with pd.read_csv(
            source,
            dtype=str,
            chunksize=chunk_size,
            compression="infer",
            skipinitialspace=True,
            engine="python",
            on_bad_lines=on_bad_line,
        ) as reader:
            for chunk in reader:
                missing = [column for column in COLUMNS if column not in chunk.columns]
                if missing:
                    raise UnreadableSourceError(
                        f"{source} is missing columns: {', '.join(missing)}"
                    )
                yield chunk
    except pd.errors.EmptyDataError:
        logger.warning("%s is empty", source)
    except (OSError, UnicodeDecodeError, pd.errors.ParserError) as exc:
        raise UnreadableSourceError(f"Cannot read {source}: {exc}") from exc


def _parse_float(value: str) -> float:
    try:
        return float(value)
    except ValueError:
        return math.nan


def _to_numbers(raw: "pd.Series[str]") -> "pd.Series[float]":
    # float() is correctly rounded, pandas' fast parser can be off by one ulp
    return raw.map(_parse_float, na_action="ignore").astype(np.float64)


def _parse_timestamps(raw: "pd.Series[str]") -> "pd.Series[float]":
    # Accept both epoch seconds and ISO-8601 strings
    numeric = _to_numbers(raw)
    iso = pd.to_datetime(
        raw.where(numeric.isna()), utc=True, errors="coerce", format="ISO8601"
    )
    seconds = (iso - pd.Timestamp(0, tz="UTC")) / pd.Timedelta(seconds=1)
    return numeric.fillna(seconds)


def _validate_chunk(chunk: pd.DataFrame) -> pd.DataFrame:
    """Coerce a raw chunk to numbers, dropping rows that violate message invariants."""
    frame = pd.DataFrame(
        {
            "vessel_id": _to_numbers(chunk["vessel_id"]),
            "ts": _parse_timestamps(chunk["timestamp_utc"]),
            "lat": _to_numbers(chunk["lat"]),
            "lon": _to_numbers(chunk["lon"]),
            "sog": _to_numbers(chunk["sog_knots"]),
            "code": _to_numbers(chunk["ship_type"]),
        }
    )

    valid = (
        np.isfinite(frame["vessel_id"])
        & (frame["vessel_id"] == frame["vessel_id"].round())
        & np.isfinite(frame["ts"])
        & (frame["ts"] > 0)
        & frame["lat"].between(-90.0, 90.0)
        & frame["lon"].between(-180.0, 180.0)
        & np.isfinite(frame["sog"])
        & (frame["sog"] >= 0)
    )

    # Unknown or out-of-range ship types are not fatal, they classify as "other"
    code = frame["code"]
    frame["code"] = code.where((code == code.round()) & code.between(0, 99))

    # Longitude 180 and -180 are the same meridian
    frame.loc[frame["lon"] == 180.0, "lon"] = -180.0

    return frame[valid]


def _build_stream(vessel_id: int, rows: FloatArray) -> tuple[VesselStream, int]:
    """Sort buffered rows, drop duplicate timestamps, and build a vessel stream.

    Of several rows sharing a timestamp, the one that sorts lowest on
    (latitude, longitude, speed, ship type) is kept rather than the first one
    read, so the stream does not depend on the order of the input rows.
    """
    codes = np.nan_to_num(rows[:, _CODE], nan=-1.0)

    # Sort on every field so the surviving duplicate never depends on input order
    order = np.lexsort((codes, rows[:, _SOG], rows[:, _LON], rows[:, _LAT], rows[:, _TS]))
    rows = rows[order]

    keep = np.ones(len(rows), dtype=bool)
    keep[1:] = rows[1:, _TS] != rows[:-1, _TS]
    rows = rows[keep]

    messages = tuple(
        AisMessage(
            vessel_id=vessel_id,
            timestamp=float(ts),
            position=Position(float(lat), float(lon)),
            sog=float(sog),
            ship_type_code=None if np.isnan(code) else int(code),
        )
        for ts, lat, lon, sog, code in rows
    )

    known = next((m.ship_type_code for m in messages if m.ship_type_code is not None), None)
    stream = VesselStream(vessel_id, messages, classify_ship_type(known))

    return stream, int((~keep).sum())


def ingest(
    *sources: str | Path, chunk_size: int = DEFAULT_CHUNK_SIZE
) -> IngestResult:
    """Read message files into per-vessel, time-ordered streams.

    Files are read in chunks, so memory is bounded by the per-vessel buffers rather
    than by file size. Rows that violate message invariants, and rows with more
    fields than the header, are counted as malformed and skipped.

    Args:
        sources: Paths of delimiter-separated files, optionally gzip-compressed.
        chunk_size: The number of rows to parse at a time.

    Returns:
        The vessel streams, keyed by vessel ID, and an ingestion report.

    Raises:
        UnreadableSourceError: If a file cannot be opened or parsed.
    """
    report = IngestReport()
    buffers: dict[int, list[FloatArray]] = defaultdict(list)

    for source in map(Path, sources):
        source_records = 0
        bad_lines: list[list[str]] = []
        for chunk in _read_chunks(source, chunk_size, bad_lines.append):
            source_records += len(chunk)
            frame = _validate_chunk(chunk)
            report.malformed += len(chunk) - len(frame)

            values = frame[["ts", "lat", "lon", "sog", "code"]].to_numpy(dtype=np.float64)
            vessel_ids = frame["vessel_id"].to_numpy(dtype=np.int64)

            # Group the chunk by vessel with one stable sort
            order = np.argsort(vessel_ids, kind="stable")
            ids, starts = np.unique(vessel_ids[order], return_index=True)
            for vessel_id, rows in zip(ids, np.split(values[order], starts[1:])):
                buffers[int(vessel_id)].append(rows)

        # Rows with more fields than the header never reach a chunk
        if bad_lines:
            logger.debug("Skipped %d over-long rows in %s", len(bad_lines), source)
        source_records += len(bad_lines)
        report.malformed += len(bad_lines)

        report.files[str(source)] = source_records
        report.records += source_records
        logger.debug("Read %d records from %s", source_records, source)

    streams: dict[int, VesselStream] = {}
    for vessel_id in sorted(buffers):
        stream, duplicates = _build_stream(vessel_id, np.concatenate(buffers.pop(vessel_id)))
        streams[vessel_id] = stream
        report.duplicates += duplicates
        report.messages += len(stream)

    report.malformed += report.duplicates
    report.vessels = len(streams)

    logger.info(
        "Ingested %d records: %d vessels, %d messages, %d malformed",
        report.records,
        report.vessels,
        report.messages,
        report.malformed,
    )

    return IngestResult(QuerySet(streams), report)


def streams_from_messages(messages: list[AisMessage]) -> QuerySet[int, VesselStream]:
    """Group in-memory messages into vessel streams, with the same rules as `ingest`."""
    buffers: dict[int, list[list[float]]] = defaultdict(list)
    for m in messages:
        code = np.nan if m.ship_type_code is None else float(m.ship_type_code)
        buffers[m.vessel_id].append(
            [m.timestamp, m.position.lat, m.position.lon, m.sog, code]
        )

    return QuerySet(
        {
            vessel_id: _build_stream(vessel_id, np.asarray(buffers[vessel_id], dtype=np.float64))[0]
            for vessel_id in sorted(buffers)
        }
    )
