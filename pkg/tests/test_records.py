import io
from enum import Enum

import pytest

from aiseta.ais import ShipClass
from aiseta.errors import MalformedRecordError, UnreadableSourceError
from aiseta.records import (
    Converter,
    format_label,
    format_message,
    format_summary,
    iter_trajectories,
    load_labels,
    load_trajectories,
    save_labels,
    save_trajectories,
    write_trajectories,
)
from aiseta.transmitters import TransmitterClass, TransmitterLabel

from builders import message, track, trajectory


class Color(Enum):
    RED = "red"
    BLUE = "blue"


class TestConverter:
    def test_floats_are_exact(self):
        value = 0.1 + 0.2
        assert Converter.deserialize(float, Converter.serialize(value)) == value

    def test_enums_by_value_or_name(self):
        assert Converter.serialize(Color.RED) == "red"
        assert Converter.deserialize(Color, "red") is Color.RED
        assert Converter.deserialize(Color, "blue") is Color.BLUE
        assert Converter.deserialize(Color, "Blue") is Color.BLUE

    def test_unknown_enum_value(self):
        with pytest.raises(ValueError):
            Converter.deserialize(Color, "green")

    def test_unregistered_type(self):
        with pytest.raises(ValueError):
            Converter.serialize(object())
        with pytest.raises(ValueError):
            Converter.serialize("tanker")

    def test_record_and_tokenize(self):
        line = Converter.record("TAG", 1, 2.5, ShipClass.TANKER)
        assert line == "TAG 1 2.5 tanker"
        assert Converter.tokenize(line) == ["TAG", "1", "2.5", "tanker"]
        assert Converter.tokenize("a, b,c", ",") == ["a", "b", "c"]


class TestTrajectoryFiles:
    def test_record_formats(self):
        t = trajectory([message(7, ship_type=None), message(7, message().timestamp + 60, lon=0.1)])
        assert format_summary(t).startswith("TRAJ 7 0 cargo ")
        assert format_message(t.messages[0]).endswith(" -")
        assert format_message(t.messages[0]).split()[:2] == ["MSG", repr(t.messages[0].timestamp)]

    def test_save_and_load(self, tmp_path):
        trajectories = [trajectory(track(vessel_id=1)), trajectory(track(vessel_id=2, ship_type=80), ship_class=ShipClass.TANKER)]
        path = tmp_path / "train.traj"

        assert save_trajectories(trajectories, path) == 2
        assert load_trajectories(path) == trajectories

    def test_summary_only_output(self):
        out = io.StringIO()
        write_trajectories([trajectory(track())], out, include_messages=False)
        lines = out.getvalue().splitlines()
        assert len(lines) == 2
        assert lines[0].startswith("#")

    def test_message_count_mismatch(self):
        out = io.StringIO()
        write_trajectories([trajectory(track(count=3))], out)
        lines = out.getvalue().splitlines()[:-1]

        with pytest.raises(MalformedRecordError):
            list(iter_trajectories(lines))

    @pytest.mark.parametrize(
        "line",
        ["TRAJ 1 0 cargo 1.0 2.0", "TRAJ 1 0 ship 1.0 2.0 0", "MSG 1.0 0 0 1 -", "BOGUS 1"],
    )
    def test_malformed_lines(self, line):
        with pytest.raises(MalformedRecordError):
            list(iter_trajectories(["# aiseta trajectories 1", line]))

    def test_missing_file(self, tmp_path):
        with pytest.raises(UnreadableSourceError):
            load_trajectories(tmp_path / "missing.traj")


class TestLabelFiles:
    def test_save_and_load(self, tmp_path):
        labels = [
            TransmitterLabel(1, TransmitterClass.PRIMARY, 0.93),
            TransmitterLabel(2, TransmitterClass.SECONDARY, 0.12),
        ]
        path = tmp_path / "labels.csv"
        save_labels(labels, path)

        assert load_labels(path) == {1: labels[0], 2: labels[1]}
        assert path.read_text(encoding="utf-8").splitlines()[1] == format_label(labels[0])

    def test_malformed_label(self, tmp_path):
        path = tmp_path / "labels.csv"
        path.write_text("vessel_id,label,posterior\n1,maybe,0.5\n", encoding="utf-8")
        with pytest.raises(MalformedRecordError):
            load_labels(path)
