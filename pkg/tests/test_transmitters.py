import math

import numpy as np
import pytest

from aiseta import _json
from aiseta.config import FitUnit, SelectionConfig
from aiseta.errors import DegenerateDataError, VersionMismatchError
from aiseta.segmentation import SubTrajectory, TrajectorySummary
from aiseta.transmitters import (
    GmmModelRecord,
    TransmitterClass,
    VesselFeatures,
    apply_selection_model,
    build_features,
    classify_vessels,
    fit_gmm,
    label_all_primary,
    model_from_json,
    model_to_json,
    primary_component,
    select_transmitters,
)

from builders import message, trajectory

SIGMA = 0.3
LONG_HAUL = np.array([2.9, 2.9, 2.9])
SHORT_HAUL = LONG_HAUL - 3 * SIGMA


def blobs(long_haul: int = 600, short_haul: int = 1400, seed: int = 42):
    rng = np.random.default_rng(seed)
    x = np.vstack(
        [
            rng.normal(LONG_HAUL, SIGMA, (long_haul, 3)),
            rng.normal(SHORT_HAUL, SIGMA, (short_haul, 3)),
        ]
    )
    truth = np.array([True] * long_haul + [False] * short_haul)
    return x, truth


def summarized(vessel_id: int, index: int, displacement: float, time_span: float, num_messages: int):
    t = trajectory([message(vessel_id)], index=index)
    return SubTrajectory(vessel_id, index, t.ship_class, t.messages, TrajectorySummary(displacement, time_span, num_messages))


class TestFeatures:
    def test_mean_then_log(self):
        features = build_features([summarized(1, 0, 100, 60, 20), summarized(1, 1, 1000, 600, 200)])
        assert len(features) == 1
        assert features[0].x == pytest.approx((math.log10(550), math.log10(330), math.log10(110)))

    def test_single_trajectory_is_identity(self):
        features = build_features([summarized(4, 0, 250, 90, 30)])
        assert features[0].x == pytest.approx((math.log10(250), math.log10(90), math.log10(30)))

    def test_ascending_vessel_order(self):
        features = build_features([summarized(v, 0, 200, 60, 12) for v in (9, 2, 5)])
        assert [f.vessel_id for f in features] == [2, 5, 9]
        assert len({f.x for f in features}) == 1


class TestFitGmm:
    def test_recovers_separated_blobs(self):
        x, truth = blobs()
        model = fit_gmm(x, seed=0)
        primary = primary_component(model)

        np.testing.assert_allclose(model.means[primary], LONG_HAUL, atol=0.05)
        np.testing.assert_allclose(model.means[1 - primary], SHORT_HAUL, atol=0.05)

        predicted = model.responsibilities(x)[:, primary] > 0.5
        assert np.mean(predicted == truth) >= 0.99
        assert model.weights[primary] == pytest.approx(0.3, abs=0.02)

    def test_two_point_pairs(self):
        x = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [2.0, 2.0, 2.0], [2.0, 2.0, 2.0]])
        model = fit_gmm(x, seed=1)
        means = sorted(model.means.tolist())
        np.testing.assert_allclose(means, [[0.0, 0.0, 0.0], [2.0, 2.0, 2.0]], atol=1e-9)

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
    def test_log_likelihood_does_not_decrease(self, seed):
        x, _ = blobs(seed=seed + 3)
        trace = fit_gmm(x, seed=seed).log_likelihood_trace
        assert len(trace) >= 2
        for before, after in zip(trace, trace[1:]):
            assert after >= before - 1e-6 * abs(before)

    def test_stable_across_seeds(self):
        x, _ = blobs(seed=9)
        a = fit_gmm(x, seed=0)
        b = fit_gmm(x, seed=123)
        assert a.log_likelihood(x) == pytest.approx(b.log_likelihood(x), abs=1e-3)

    def test_same_seed_is_deterministic(self):
        x, _ = blobs(seed=9)
        a, b = fit_gmm(x, seed=4), fit_gmm(x, seed=4)
        np.testing.assert_array_equal(a.means, b.means)
        assert a.log_likelihood_trace == b.log_likelihood_trace

    def test_too_few_points(self):
        with pytest.raises(DegenerateDataError):
            fit_gmm(np.zeros((3, 3)) + np.arange(3)[:, None])

    def test_identical_points(self):
        with pytest.raises(DegenerateDataError):
            fit_gmm(np.ones((10, 3)))

    def test_model_json(self):
        x, _ = blobs(long_haul=50, short_haul=50)
        model = fit_gmm(x, seed=2)
        loaded = model_from_json(model_to_json(model))

        np.testing.assert_array_equal(loaded.means, model.means)
        np.testing.assert_array_equal(loaded.covariances, model.covariances)
        np.testing.assert_allclose(loaded.responsibilities(x), model.responsibilities(x))

    def test_model_version_gate(self):
        x, _ = blobs(long_haul=50, short_haul=50)
        record = _json.parse(model_to_json(fit_gmm(x)), GmmModelRecord)
        record.version += 1
        with pytest.raises(VersionMismatchError):
            model_from_json(_json.render(record))


class TestClassify:
    def test_component_mean_is_primary(self):
        x, _ = blobs()
        model = fit_gmm(x)
        mean = tuple(model.means[primary_component(model)])

        (label,) = classify_vessels(model, [VesselFeatures(1, mean)])
        assert label.label is TransmitterClass.PRIMARY
        assert label.posterior > 0.99

    def test_primary_fraction_matches_mixture_weight(self):
        x, _ = blobs()
        model = fit_gmm(x)
        features = [VesselFeatures(i, tuple(row)) for i, row in enumerate(x)]

        labels = classify_vessels(model, features)
        fraction = sum(label.is_primary for label in labels) / len(labels)
        assert fraction == pytest.approx(0.3, abs=0.02)

    def test_empty(self):
        x, _ = blobs(long_haul=10, short_haul=10)
        assert classify_vessels(fit_gmm(x), []) == []


class TestSelectTransmitters:
    @staticmethod
    def fleet():
        # Long-haul reporters cover hundreds of km, short-haul ones barely qualify
        trajectories = []
        rng = np.random.default_rng(0)
        for vessel_id in range(1, 41):
            scale = 8.0 if vessel_id <= 12 else 1.0
            for index in range(3):
                noise = rng.uniform(0.9, 1.1, 3)
                trajectories.append(
                    summarized(
                        vessel_id,
                        index,
                        120 * scale * noise[0],
                        60 * scale * noise[1],
                        int(15 * scale * noise[2]),
                    )
                )
        return trajectories

    def test_long_haul_vessels_are_primary(self):
        model, labels = select_transmitters(self.fleet(), SelectionConfig(seed=0))

        assert [label.vessel_id for label in labels] == list(range(1, 41))
        assert {label.vessel_id for label in labels if label.is_primary} == set(range(1, 13))
        assert model.components == 2

    def test_trajectory_fit_unit(self):
        config = SelectionConfig(fit_unit=FitUnit.TRAJECTORY)
        _, labels = select_transmitters(self.fleet(), config)
        assert {label.vessel_id for label in labels if label.is_primary} == set(range(1, 13))
        assert all(label.posterior in (0.0, 1.0) for label in labels)

    def test_fit_on_subset_labels_everyone(self):
        fleet = self.fleet()
        train = [t for t in fleet if t.index < 2]
        model, labels = select_transmitters(fleet, fit_on=train)

        assert len(labels) == 40
        assert apply_selection_model(model, fleet) == labels

    def test_label_all_primary(self):
        labels = label_all_primary(self.fleet())
        assert len(labels) == 40
        assert all(label.is_primary and label.posterior == 1.0 for label in labels)
