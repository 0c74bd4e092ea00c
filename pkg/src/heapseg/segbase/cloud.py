"""Organized point clouds and depth-image background subtraction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from heapseg.core.camera import CameraIntrinsics
from heapseg.core.image import DepthImage
from heapseg.core.masks import InstanceMask


@dataclass(frozen=True)
class OrganizedCloud:
    """Camera-frame point per pixel; invalid pixels carry no point."""

    points: np.ndarray
    valid: np.ndarray

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=np.float64)
        val = np.ascontiguousarray(self.valid, dtype=bool)
        if pts.ndim != 3 or pts.shape[2] != 3:
            raise ValueError(f"points must be (H, W, 3), got {pts.shape}")
        if val.shape != pts.shape[:2]:
            raise ValueError(
                f"valid shape {val.shape} does not match points {pts.shape[:2]}"
            )
        pts.setflags(write=False)
        val.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "valid", val)

    @property
    def height(self) -> int:
        return self.points.shape[0]

    @property
    def width(self) -> int:
        return self.points.shape[1]

    def valid_points(self) -> tuple[np.ndarray, np.ndarray]:
        """(P, 3) valid points plus their flat row-major pixel indices."""
        idx = np.flatnonzero(self.valid.ravel())
        return self.points.reshape(-1, 3)[idx], idx

    def restricted(self, keep: np.ndarray) -> "OrganizedCloud":
        """Cloud with validity intersected with a boolean pixel mask."""
        keep = np.asarray(keep, dtype=bool)
        if keep.shape != self.valid.shape:
            raise ValueError(f"mask shape {keep.shape} != cloud {self.valid.shape}")
        new_valid = self.valid & keep
        points = np.where(new_valid[:, :, None], self.points, 0.0)
        return OrganizedCloud(points=points, valid=new_valid)


def backproject(img: DepthImage, intrinsics: CameraIntrinsics) -> OrganizedCloud:
    """Lift a depth image to camera-frame points through pixel centers.

    Pixel (column u, row v) with depth d maps to the point the forward
    projection would image at (u + 0.5, v + 0.5).
    """
    depth = img.data.astype(np.float64)
    us = np.arange(img.width, dtype=np.float64) + 0.5
    vs = np.arange(img.height, dtype=np.float64) + 0.5
    x = (us[None, :] - intrinsics.cx) * depth / intrinsics.fx
    y = (vs[:, None] - intrinsics.cy) * depth / intrinsics.fy
    points = np.stack([x, y, depth], axis=-1)
    points = np.where(img.valid[:, :, None], points, 0.0)
    return OrganizedCloud(points=points, valid=img.valid)


def subtract_background(
    img: DepthImage, background: DepthImage, delta: float
) -> InstanceMask:
    """Foreground mask: valid pixels that sit more than delta above background.

    A pixel is foreground when img is valid there and the background either
    has no return or lies more than delta meters behind it.
    """
    if (img.height, img.width) != (background.height, background.width):
        raise ValueError(
            f"image is {img.width}x{img.height}, "
            f"background is {background.width}x{background.height}"
        )
    fg = img.valid & (~background.valid | (background.data - img.data > delta))
    return InstanceMask.from_bitmap(fg)
