"""Synthetic heap generation: configs, height-field settling, scene sampling."""

from heapseg.heapgen.config import (
    BIN_MESH_ID,
    TABLE_MESH_ID,
    BinSpec,
    CameraRanges,
    GenConfig,
    Interval,
)
from heapseg.heapgen.heightfield import HeightField
from heapseg.heapgen.sampling import (
    sample_camera,
    sample_heap_state,
    sample_object_count,
    scene_rng,
    settle_object,
)

__all__ = [
    "BIN_MESH_ID",
    "TABLE_MESH_ID",
    "BinSpec",
    "CameraRanges",
    "GenConfig",
    "HeightField",
    "Interval",
    "sample_camera",
    "sample_heap_state",
    "sample_object_count",
    "scene_rng",
    "settle_object",
]
