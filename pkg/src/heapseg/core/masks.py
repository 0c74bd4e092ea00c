"""Instance masks stored as COCO-style run-length encodings.

RLE counts alternate runs of 0s and 1s over the mask flattened in
column-major order, always starting with the count of 0s (which may be
zero). This matches the uncompressed COCO segmentation format, so emitted
annotations interoperate with standard COCO tooling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def rle_encode(bitmap: np.ndarray) -> np.ndarray:
    """Encode a 2-D boolean mask as column-major alternating run lengths."""
    b = np.asarray(bitmap)
    if b.ndim != 2:
        raise ValueError(f"bitmap must be 2-D, got shape {b.shape}")
    flat = b.ravel(order="F").astype(np.uint8)
    if flat.size == 0:
        return np.zeros(1, dtype=np.int64)
    change = np.flatnonzero(np.diff(flat)) + 1
    bounds = np.concatenate(([0], change, [flat.size]))
    runs = np.diff(bounds).astype(np.int64)
    if flat[0] == 1:
        runs = np.concatenate(([0], runs))
    return runs


def rle_decode(rle: np.ndarray, height: int, width: int) -> np.ndarray:
    """Inverse of :func:`rle_encode`; returns an (H, W) boolean array."""
    runs = np.asarray(rle, dtype=np.int64)
    total = int(runs.sum())
    if total != height * width:
        raise ValueError(f"run lengths sum to {total}, expected {height * width}")
    values = np.zeros(len(runs), dtype=bool)
    values[1::2] = True
    flat = np.repeat(values, runs)
    return flat.reshape((height, width), order="F")


@dataclass(frozen=True)
class InstanceMask:
    """Pixels of one visible object instance."""

    height: int
    width: int
    rle: np.ndarray
    area: int

    def __post_init__(self):
        runs = np.ascontiguousarray(self.rle, dtype=np.int64)
        runs.setflags(write=False)
        object.__setattr__(self, "rle", runs)
        if runs.ndim != 1 or (runs.size and runs.min() < 0):
            raise ValueError("rle must be a 1-D array of non-negative counts")
        total = int(runs.sum())
        if total != self.height * self.width:
            raise ValueError(
                f"run lengths sum to {total}, expected {self.height * self.width}"
            )
        ones = int(runs[1::2].sum())
        if ones != self.area:
            raise ValueError(f"cached area {self.area} != encoded area {ones}")

    @classmethod
    def from_bitmap(cls, bitmap: np.ndarray) -> "InstanceMask":
        b = np.asarray(bitmap, dtype=bool)
        runs = rle_encode(b)
        return cls(height=b.shape[0], width=b.shape[1], rle=runs, area=int(b.sum()))

    def decode(self) -> np.ndarray:
        return rle_decode(self.rle, self.height, self.width)

    def bbox(self) -> tuple[int, int, int, int]:
        """Tight (x, y, w, h) box in pixels; (0, 0, 0, 0) for an empty mask."""
        if self.area == 0:
            return (0, 0, 0, 0)
        b = self.decode()
        cols = np.flatnonzero(b.any(axis=0))
        rows = np.flatnonzero(b.any(axis=1))
        x0, x1 = int(cols[0]), int(cols[-1])
        y0, y1 = int(rows[0]), int(rows[-1])
        return (x0, y0, x1 - x0 + 1, y1 - y0 + 1)


def mask_iou(a: InstanceMask, b: InstanceMask) -> float:
    """Intersection over union of two masks; 0.0 when the union is empty."""
    if (a.height, a.width) != (b.height, b.width):
        raise ValueError(
            f"mask dimensions differ: {a.width}x{a.height} vs {b.width}x{b.height}"
        )
    da, db = a.decode(), b.decode()
    inter = int(np.count_nonzero(da & db))
    union = a.area + b.area - inter
    return inter / union if union else 0.0


def iou_matrix(preds: list[InstanceMask], gts: list[InstanceMask]) -> np.ndarray:
    """Pairwise IoU, decoding each mask once. Shape (len(preds), len(gts))."""
    out = np.zeros((len(preds), len(gts)))
    if not preds or not gts:
        return out
    dp = [p.decode() for p in preds]
    dg = [g.decode() for g in gts]
    for i, (p, pm) in enumerate(zip(preds, dp)):
        for j, (g, gm) in enumerate(zip(gts, dg)):
            inter = int(np.count_nonzero(pm & gm))
            union = p.area + g.area - inter
            out[i, j] = inter / union if union else 0.0
    return out
