"""Depth image container."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Pixels with no depth return store 0.0; all arithmetic must branch on it.
INVALID_DEPTH = 0.0


@dataclass(frozen=True)
class DepthImage:
    """H x W grid of range values in meters, 0.0 marking invalid pixels."""

    data: np.ndarray

    def __post_init__(self):
        d = np.ascontiguousarray(self.data, dtype=np.float32)
        if d.ndim != 2:
            raise ValueError(f"depth data must be 2-D, got shape {d.shape}")
        if d.size and float(d.min()) < 0.0:
            raise ValueError("depth values must be non-negative")
        d.setflags(write=False)
        object.__setattr__(self, "data", d)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def valid(self) -> np.ndarray:
        """Boolean mask of pixels carrying a depth return."""
        return self.data > INVALID_DEPTH

    @staticmethod
    def all_invalid(width: int, height: int) -> "DepthImage":
        return DepthImage(np.zeros((height, width), dtype=np.float32))
