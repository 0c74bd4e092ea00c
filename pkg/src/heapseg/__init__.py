"""Synthetic depth-image datasets of object heaps, geometric segmentation
baselines, and COCO-style instance mask evaluation."""

__version__ = "0.1.0"

from heapseg.core.camera import CameraIntrinsics, CameraModel, deproject, project
from heapseg.core.geometry import RigidTransform
from heapseg.core.image import DepthImage
from heapseg.core.masks import InstanceMask, mask_iou
from heapseg.core.mesh import TriangleMesh
from heapseg.core.scene import ObjectInstance, SceneState
from heapseg.pipeline import (
    RunConfig,
    generate_dataset,
    load_dataset,
    segment_dataset,
    tune_params,
)

__all__ = [
    "CameraIntrinsics",
    "CameraModel",
    "DepthImage",
    "InstanceMask",
    "ObjectInstance",
    "RigidTransform",
    "RunConfig",
    "SceneState",
    "TriangleMesh",
    "deproject",
    "generate_dataset",
    "load_dataset",
    "mask_iou",
    "project",
    "segment_dataset",
    "tune_params",
]
