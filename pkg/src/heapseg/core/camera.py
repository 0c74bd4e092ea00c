"""Pinhole camera model: intrinsics, pose, projection and deprojection."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from heapseg.core.geometry import RigidTransform

Vec3 = np.ndarray


@dataclass(frozen=True)
class CameraIntrinsics:
    """Pinhole parameters in pixels for a width x height image."""

    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int

    def __post_init__(self):
        if self.fx <= 0 or self.fy <= 0:
            raise ValueError(f"focal lengths must be positive, got fx={self.fx} fy={self.fy}")
        if not (0 <= self.cx < self.width):
            raise ValueError(f"cx={self.cx} outside [0, {self.width})")
        if not (0 <= self.cy < self.height):
            raise ValueError(f"cy={self.cy} outside [0, {self.height})")

    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.fx, 0.0, self.cx], [0.0, self.fy, self.cy], [0.0, 0.0, 1.0]]
        )


@dataclass(frozen=True)
class CameraModel:
    """Intrinsics plus camera-to-world pose.

    Camera frame: +x right, +y down, +z along the optical axis into the scene.
    """

    intrinsics: CameraIntrinsics
    pose: RigidTransform

    def world_to_camera(self) -> RigidTransform:
        return self.pose.inverse()


def project(intrinsics: CameraIntrinsics, p_cam) -> tuple[float, float, float]:
    """Project a camera-frame point to pixel coordinates and depth.

    Returns (u, v, d) with u = fx*x/z + cx, v = fy*y/z + cy, d = z.
    """
    x, y, z = (float(c) for c in np.asarray(p_cam, dtype=np.float64))
    if z <= 0.0:
        raise ValueError("behind camera")
    return (
        intrinsics.fx * x / z + intrinsics.cx,
        intrinsics.fy * y / z + intrinsics.cy,
        z,
    )


def deproject(intrinsics: CameraIntrinsics, u: float, v: float, d: float) -> Vec3:
    """Back-project a pixel plus depth to a camera-frame point."""
    if d <= 0.0:
        raise ValueError("invalid depth")
    return np.array(
        [
            (u - intrinsics.cx) * d / intrinsics.fx,
            (v - intrinsics.cy) * d / intrinsics.fy,
            d,
        ]
    )
