"""Dataset persistence: depth PNGs, COCO JSON, manifests, splits."""

from heapseg.datasetio.coco_json import (
    ANNOTATIONS_SCHEMA,
    PREDICTIONS_SCHEMA,
    canonical_json,
    read_annotations,
    read_predictions,
    write_annotations,
    write_predictions,
)
from heapseg.datasetio.depth_png import pad_image, read_depth_png, write_depth_png
from heapseg.datasetio.manifest import DatasetManifest, read_manifest, write_manifest
from heapseg.datasetio.split import split_objects

__all__ = [
    "ANNOTATIONS_SCHEMA",
    "PREDICTIONS_SCHEMA",
    "DatasetManifest",
    "canonical_json",
    "pad_image",
    "read_annotations",
    "read_depth_png",
    "read_manifest",
    "read_predictions",
    "split_objects",
    "write_annotations",
    "write_depth_png",
    "write_manifest",
    "write_predictions",
]
