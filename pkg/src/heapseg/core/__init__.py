from heapseg.core.annotations import AnnotationSet, ImageAnnotation, InstanceRecord
from heapseg.core.camera import CameraIntrinsics, CameraModel, deproject, project
from heapseg.core.geometry import RigidTransform, rotation_about_z, rotation_between
from heapseg.core.image import INVALID_DEPTH, DepthImage
from heapseg.core.masks import InstanceMask, iou_matrix, mask_iou, rle_decode, rle_encode
from heapseg.core.mesh import TriangleMesh
from heapseg.core.scene import ObjectInstance, SceneState

__all__ = [
    "AnnotationSet",
    "CameraIntrinsics",
    "CameraModel",
    "DepthImage",
    "INVALID_DEPTH",
    "ImageAnnotation",
    "InstanceMask",
    "InstanceRecord",
    "ObjectInstance",
    "RigidTransform",
    "SceneState",
    "TriangleMesh",
    "deproject",
    "iou_matrix",
    "mask_iou",
    "project",
    "rle_decode",
    "rle_encode",
    "rotation_about_z",
    "rotation_between",
]
