"""Line-oriented sub-trajectory interchange files.

A file is a header line followed by one `TRAJ` summary record per sub-trajectory,
each followed by the `MSG` records of its messages:

    # aiseta trajectories 1
    TRAJ <vessel_id> <index> <ship_class> <displacement_km> <time_span_min> <num_messages>
    MSG <epoch_seconds> <lat> <lon> <sog_knots> <ship_type|->
"""

from collections.abc import Iterable, Iterator
from pathlib import Path
from typing import TextIO

from aiseta._ais.message import AisMessage, ShipClass
from aiseta._geo.position import Position
from aiseta._segmentation.segment import SubTrajectory, TrajectorySummary
from aiseta.errors import MalformedRecordError, UnreadableSourceError

from .converter import Converter

HEADER = "# aiseta trajectories 1"

_UNKNOWN = "-"


def format_summary(trajectory: SubTrajectory) -> str:
    """Return the `TRAJ` summary record of a sub-trajectory."""
    summary = trajectory.summary
    return Converter.record(
        "TRAJ",
        trajectory.vessel_id,
        trajectory.index,
        trajectory.ship_class,
        summary.displacement,
        summary.time_span,
        summary.num_messages,
    )


def format_message(message: AisMessage) -> str:
    """Return the `MSG` record of a message."""
    code = _UNKNOWN if message.ship_type_code is None else str(message.ship_type_code)
    return " ".join(
        [
            Converter.record(
                "MSG",
                message.timestamp,
                message.position.lat,
                message.position.lon,
                message.sog,
            ),
            code,
        ]
    )


def write_trajectories(
    trajectories: Iterable[SubTrajectory], out: TextIO, *, include_messages: bool = True
) -> int:
    """Write sub-trajectory records to a text stream.

    Args:
        trajectories: The sub-trajectories to write.
        out: The text stream.
        include_messages: Also write every message record.

    Returns:
        The number of sub-trajectories written.
    """
    count = 0
    out.write(f"{HEADER}\n")
    for trajectory in trajectories:
        out.write(format_summary(trajectory) + "\n")
        if include_messages:
            for message in trajectory.messages:
                out.write(format_message(message) + "\n")
        count += 1

    return count


def save_trajectories(trajectories: Iterable[SubTrajectory], path: str | Path) -> int:
    """Write a sub-trajectory file."""
    with open(path, "w", encoding="utf-8") as out:
        return write_trajectories(trajectories, out)


def _parse_summary(tokens: list[str]) -> tuple[int, int, ShipClass, TrajectorySummary]:
    # TRAJ <vessel_id> <index> <ship_class> <displacement> <time_span> <num_messages>
    _tag, vessel_id, index, ship_class, displacement, time_span, num_messages = tokens
    return (
        Converter.deserialize(int, vessel_id),
        Converter.deserialize(int, index),
        Converter.deserialize(ShipClass, ship_class),
        TrajectorySummary(
            displacement=Converter.deserialize(float, displacement),
            time_span=Converter.deserialize(float, time_span),
            num_messages=Converter.deserialize(int, num_messages),
        ),
    )


def _parse_message(vessel_id: int, tokens: list[str]) -> AisMessage:
    # MSG <timestamp> <lat> <lon> <sog> <ship_type|->
    _tag, timestamp, lat, lon, sog, code = tokens
    return AisMessage(
        vessel_id=vessel_id,
        timestamp=Converter.deserialize(float, timestamp),
        position=Position(
            Converter.deserialize(float, lat), Converter.deserialize(float, lon)
        ),
        sog=Converter.deserialize(float, sog),
        ship_type_code=None if code == _UNKNOWN else Converter.deserialize(int, code),
    )


def iter_trajectories(lines: Iterable[str], source: str = "<stream>") -> Iterator[SubTrajectory]:
    """Decode sub-trajectories from record lines.

    Args:
        lines: The record lines, including the header.
        source: A name for the input, used in error messages.

    Yields:
        Each decoded sub-trajectory, in file order.

    Raises:
        MalformedRecordError: If a record cannot be decoded or a trajectory's message
            count disagrees with its summary.
    """
    pending: tuple[int, int, ShipClass, TrajectorySummary] | None = None
    messages: list[AisMessage] = []

    def finish() -> SubTrajectory:
        assert pending is not None
        vessel_id, index, ship_class, summary = pending
        if len(messages) != summary.num_messages:
            raise MalformedRecordError(
                f"{source}: trajectory {vessel_id}/{index} declares "
                f"{summary.num_messages} messages but has {len(messages)}"
            )
        return SubTrajectory(vessel_id, index, ship_class, tuple(messages), summary)

    for lineno, line in enumerate(lines, start=1):
        tokens = Converter.tokenize(line)
        if not tokens or tokens[0].startswith("#"):
            continue

        try:
            if tokens[0] == "TRAJ":
                if pending is not None:
                    yield finish()
                pending = _parse_summary(tokens)
                messages = []
            elif tokens[0] == "MSG" and pending is not None:
                messages.append(_parse_message(pending[0], tokens))
            else:
                raise ValueError(f"unexpected record {tokens[0]!r}")
        except ValueError as exc:
            raise MalformedRecordError(f"{source}:{lineno}: {exc}") from exc

    if pending is not None:
        yield finish()


def load_trajectories(*paths: str | Path) -> list[SubTrajectory]:
    """Read one or more sub-trajectory files.

    Raises:
        UnreadableSourceError: If a file cannot be opened.
        MalformedRecordError: If a record cannot be decoded.
    """
    trajectories: list[SubTrajectory] = []
    for path in paths:
        try:
            with open(path, encoding="utf-8") as lines:
                trajectories.extend(iter_trajectories(lines, str(path)))
        except OSError as exc:
            raise UnreadableSourceError(f"Cannot read {path}: {exc}") from exc

    return trajectories
