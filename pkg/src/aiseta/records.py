"""Line-oriented interchange files for sub-trajectories and transmitter labels."""

from ._records.converter import BaseConverter, Converter
from ._records.labels import format_label, load_labels, save_labels, write_labels
from ._records.trajectories import (
    format_message,
    format_summary,
    iter_trajectories,
    load_trajectories,
    save_trajectories,
    write_trajectories,
)

__all__ = [
    "BaseConverter",
    "Converter",
    "format_label",
    "format_message",
    "format_summary",
    "iter_trajectories",
    "load_labels",
    "load_trajectories",
    "save_labels",
    "save_trajectories",
    "write_labels",
    "write_trajectories",
]
