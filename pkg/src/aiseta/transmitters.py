"""Dataset-adaptive selection of primary transmitters.

Each vessel is summarized by the log10 means of its sub-trajectories' displacement,
time span and message count. A two-component Gaussian mixture is fitted on those
vectors, and vessels whose posterior for the long-haul (larger mean displacement)
component exceeds 0.5 are primary transmitters.
"""

from ._transmitters.features import (
    VesselFeatures,
    build_features,
    feature_matrix,
    summary_vector,
)
from ._transmitters.gmm import (
    GmmModel,
    GmmModelRecord,
    fit_gmm,
    model_from_json,
    model_to_json,
)
from ._transmitters.select import (
    TransmitterClass,
    TransmitterLabel,
    apply_selection_model,
    classify_by_trajectory,
    classify_vessels,
    fit_selection_model,
    label_all_primary,
    primary_component,
    select_transmitters,
)

__all__ = [
    "GmmModel",
    "GmmModelRecord",
    "TransmitterClass",
    "TransmitterLabel",
    "VesselFeatures",
    "apply_selection_model",
    "build_features",
    "classify_by_trajectory",
    "classify_vessels",
    "feature_matrix",
    "fit_gmm",
    "fit_selection_model",
    "label_all_primary",
    "model_from_json",
    "model_to_json",
    "primary_component",
    "select_transmitters",
    "summary_vector",
]
