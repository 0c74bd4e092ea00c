"""Visible-mask extraction from isolated-object renders."""

from __future__ import annotations

import numpy as np

from heapseg.core.image import DepthImage
from heapseg.core.masks import InstanceMask


def extract_modal_masks(
    full: DepthImage,
    isolated: list[DepthImage],
    eps: float,
) -> list[InstanceMask]:
    """Partition visible foreground pixels among objects.

    A pixel joins object i's mask when both the full render and object i's
    isolated render are valid there and agree within eps. Where several
    objects qualify, the smallest isolated depth wins (ties: lowest index),
    so the masks are pairwise disjoint. Objects left with no pixels are
    dropped; output order follows the input order.
    """
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    for img in isolated:
        if (img.height, img.width) != (full.height, full.width):
            raise ValueError(
                f"isolated render is {img.width}x{img.height}, "
                f"full render is {full.width}x{full.height}"
            )
    if not isolated:
        return []
    stack = np.stack([img.data for img in isolated])
    qualifies = full.valid & (stack > 0.0) & (np.abs(stack - full.data) <= eps)
    candidates = np.where(qualifies, stack, np.inf)
    winner = np.argmin(candidates, axis=0)  # argmin ties resolve to lowest index
    claimed = qualifies.any(axis=0)
    masks = []
    for i in range(stack.shape[0]):
        bitmap = claimed & (winner == i)
        if bitmap.any():
            masks.append(InstanceMask.from_bitmap(bitmap))
    return masks
