"""GeoJSON export of per-cell errors."""

from collections.abc import Iterable
from pathlib import Path

import geojson

from aiseta._geo.geohash import geohash_decode_bbox
from aiseta._logger import logger

from .evaluate import SegmentRecord
from .metrics import node_errors


def node_error_features(records: Iterable[SegmentRecord]) -> geojson.FeatureCollection:
    """Build one polygon feature per traversed cell, carrying its mean absolute error.

    Cells never traversed by the records are absent.
    """
    features: list[geojson.Feature] = []
    for node in node_errors(records):
        bbox = geohash_decode_bbox(node.cell)
        center = bbox.center
        features.append(
            geojson.Feature(
                id=node.cell,
                geometry=geojson.Polygon([bbox.ring()]),
                properties={
                    "cell": node.cell,
                    "mean_error": node.mean_error,
                    "count": node.count,
                    "center_lat": center.lat,
                    "center_lon": center.lon,
                },
            )
        )

    return geojson.FeatureCollection(features)


def export_node_errors(records: Iterable[SegmentRecord], path: str | Path) -> int:
    """Write the per-cell error features to a GeoJSON file.

    Returns:
        The number of cells written.
    """
    collection = node_error_features(records)
    with open(path, "w", encoding="utf-8") as f:
        geojson.dump(collection, f, sort_keys=True, indent=2)

    logger.info("Wrote errors of %d cells to %s", len(collection["features"]), path)
    return len(collection["features"])
