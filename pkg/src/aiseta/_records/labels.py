"""Transmitter label files: one `vessel_id,label,posterior` line per vessel."""

from collections.abc import Iterable
from pathlib import Path
from typing import TextIO

from aiseta._transmitters.select import TransmitterClass, TransmitterLabel
from aiseta.errors import MalformedRecordError, UnreadableSourceError

from .converter import Converter

HEADER = "vessel_id,label,posterior"


def format_label(label: TransmitterLabel) -> str:
    """Return the record line of a label."""
    return Converter.record(
        Converter.serialize(label.vessel_id), label.label, label.posterior, separator=","
    )


def write_labels(labels: Iterable[TransmitterLabel], out: TextIO) -> None:
    """Write a label file to a text stream."""
    out.write(f"{HEADER}\n")
    for label in labels:
        out.write(format_label(label) + "\n")


def save_labels(labels: Iterable[TransmitterLabel], path: str | Path) -> None:
    """Write a label file."""
    with open(path, "w", encoding="utf-8") as out:
        write_labels(labels, out)


def load_labels(path: str | Path) -> dict[int, TransmitterLabel]:
    """Read a label file into a mapping of vessel ID to label.

    Raises:
        UnreadableSourceError: If the file cannot be opened.
        MalformedRecordError: If a line cannot be decoded.
    """
    labels: dict[int, TransmitterLabel] = {}
    try:
        with open(path, encoding="utf-8") as lines:
            for lineno, line in enumerate(lines, start=1):
                if not line.strip() or line.strip() == HEADER:
                    continue

                try:
                    vessel_id, label, posterior = Converter.tokenize(line, ",")
                    labels[int(vessel_id)] = TransmitterLabel(
                        Converter.deserialize(int, vessel_id),
                        Converter.deserialize(TransmitterClass, label),
                        Converter.deserialize(float, posterior),
                    )
                except ValueError as exc:
                    raise MalformedRecordError(f"{path}:{lineno}: {exc}") from exc
    except OSError as exc:
        raise UnreadableSourceError(f"Cannot read {path}: {exc}") from exc

    return labels
