import pytest

from aiseta import RunConfig
from aiseta.config import CountBasis
from aiseta.errors import MalformedRecordError


class TestRunConfig:
    def test_round_trip(self):
        config = RunConfig()
        config.segmentation.max_gap_minutes = 60.0
        config.estimator.count_basis = CountBasis.RUNS
        assert RunConfig.from_json(config.to_json()) == config

    def test_partial_document_keeps_defaults(self):
        config = RunConfig.from_json('{"split": {"held_out_days": 10}}')
        assert config.split.held_out_days == 10
        assert config.estimator == RunConfig().estimator

    @pytest.mark.parametrize(
        "text",
        [
            '{"estimator": {"reliability_threshold": "eight"}}',
            '{"segmentation": {"max_gap_minutes": "an hour"}}',
            '{"estimator": {"count_basis": "trips"}}',
            '{"split": {"held_out": 7}}',
        ],
    )
    def test_mistyped_values_are_rejected(self, text):
        with pytest.raises(MalformedRecordError):
            RunConfig.from_json(text)

    def test_load(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text('{"estimator": {"reliability_threshold": "eight"}}', encoding="utf-8")
        with pytest.raises(MalformedRecordError):
            RunConfig.load(path)
