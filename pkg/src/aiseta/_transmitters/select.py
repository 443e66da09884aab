"""Primary/secondary transmitter classification."""

from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np

from aiseta._logger import logger
from aiseta._segmentation.segment import SubTrajectory
from aiseta.config import FitUnit, SelectionConfig

from .features import VesselFeatures, build_features, feature_matrix, summary_vector
from .gmm import GmmModel, fit_gmm

DISPLACEMENT_AXIS = 0


class TransmitterClass(Enum):
    """Reporting-quality stratum of a vessel."""

    PRIMARY = "primary"
    """Consistent, high-quality reporter whose trajectories feed the graph."""

    SECONDARY = "secondary"


@dataclass(frozen=True, slots=True)
class TransmitterLabel:
    """The transmitter class assigned to a vessel."""

    vessel_id: int
    label: TransmitterClass
    posterior: float
    """Probability of the primary component (or primary vote share)."""

    @property
    def is_primary(self) -> bool:
        """Return True if the vessel is a primary transmitter."""
        return self.label is TransmitterClass.PRIMARY


def primary_component(model: GmmModel) -> int:
    """Return the index of the component with the largest mean displacement."""
    return int(np.argmax(model.means[:, DISPLACEMENT_AXIS]))


def _label(vessel_id: int, posterior: float) -> TransmitterLabel:
    label = TransmitterClass.PRIMARY if posterior > 0.5 else TransmitterClass.SECONDARY
    return TransmitterLabel(vessel_id, label, posterior)


def classify_vessels(
    model: GmmModel, features: Sequence[VesselFeatures]
) -> list[TransmitterLabel]:
    """Label vessels with a frozen model.

    The primary component is the one with the larger mean along the displacement
    axis, so the result does not depend on component order.

    Args:
        model: A fitted model.
        features: Per-vessel feature vectors.

    Returns:
        One label per vessel, in input order.
    """
    if not features:
        return []

    posteriors = model.responsibilities(feature_matrix(features))[:, primary_component(model)]
    return [_label(f.vessel_id, float(p)) for f, p in zip(features, posteriors)]


def classify_by_trajectory(
    model: GmmModel, trajectories: Iterable[SubTrajectory]
) -> list[TransmitterLabel]:
    """Label each trajectory with the model, then label vessels by majority vote.

    The vessel posterior is its share of primary-labelled trajectories; a tie is
    not a majority.
    """
    ordered = list(trajectories)
    if not ordered:
        return []

    x = np.array([summary_vector(t.summary) for t in ordered], dtype=np.float64)
    posteriors = model.responsibilities(x)[:, primary_component(model)]

    votes: dict[int, list[bool]] = defaultdict(list)
    for t, p in zip(ordered, posteriors):
        votes[t.vessel_id].append(bool(p > 0.5))

    return [
        _label(vessel_id, sum(votes[vessel_id]) / len(votes[vessel_id]))
        for vessel_id in sorted(votes)
    ]


def fit_selection_model(
    trajectories: Iterable[SubTrajectory], config: SelectionConfig | None = None
) -> GmmModel:
    """Fit the transmitter mixture model on the given (training) sub-trajectories."""
    config = config or SelectionConfig()

    if config.fit_unit is FitUnit.TRAJECTORY:
        x = np.array([summary_vector(t.summary) for t in trajectories], dtype=np.float64)
    else:
        x = feature_matrix(build_features(trajectories))

    return fit_gmm(
        x.reshape(-1, 3),
        components=config.components,
        seed=config.seed,
        max_iter=config.max_iter,
        tol=config.tol,
        covariance_floor=config.covariance_floor,
    )


def apply_selection_model(
    model: GmmModel,
    trajectories: Iterable[SubTrajectory],
    config: SelectionConfig | None = None,
) -> list[TransmitterLabel]:
    """Label every vessel of the given sub-trajectories with a frozen model."""
    config = config or SelectionConfig()

    if config.fit_unit is FitUnit.TRAJECTORY:
        labels = classify_by_trajectory(model, trajectories)
    else:
        labels = classify_vessels(model, build_features(trajectories))

    primary = sum(1 for label in labels if label.is_primary)
    logger.info("Labelled %d of %d vessels as primary transmitters", primary, len(labels))
    return labels


def select_transmitters(
    trajectories: Sequence[SubTrajectory],
    config: SelectionConfig | None = None,
    *,
    fit_on: Sequence[SubTrajectory] | None = None,
) -> tuple[GmmModel, list[TransmitterLabel]]:
    """Fit the mixture model and label every vessel.

    Args:
        trajectories: The sub-trajectories of every vessel to label.
        config: Mixture model settings.
        fit_on: The sub-trajectories to fit on (typically the training split),
            defaults to all of `trajectories`.

    Returns:
        The fitted model and one label per vessel.
    """
    model = fit_selection_model(trajectories if fit_on is None else fit_on, config)
    return model, apply_selection_model(model, trajectories, config)


def label_all_primary(trajectories: Iterable[SubTrajectory]) -> list[TransmitterLabel]:
    """Label every vessel primary, for when selection is disabled or cannot be fitted."""
    vessel_ids = sorted({t.vessel_id for t in trajectories})
    return [TransmitterLabel(vessel_id, TransmitterClass.PRIMARY, 1.0) for vessel_id in vessel_ids]
