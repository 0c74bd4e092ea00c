"""Prediction post-processing: foreground filtering and NMS."""

from __future__ import annotations

import numpy as np

from heapseg.core.masks import InstanceMask
from heapseg.cocoeval.matching import Prediction, sort_key


def filter_and_nms(
    preds: list[Prediction],
    foreground: InstanceMask,
    overlap: float = 0.5,
    nms_iou: float = 0.5,
) -> list[Prediction]:
    """Drop mostly-background predictions, then greedy non-max suppression.

    A prediction survives the filter when at least ``overlap`` of its own
    area lies inside the foreground mask. NMS then walks survivors by score
    descending (ties: area descending, insertion order) and drops any
    prediction with IoU >= nms_iou against an already kept one. Survivors
    come back in that sorted order.
    """
    fg = foreground.decode()
    filtered = []
    bitmaps = []
    for p in preds:
        if (p.mask.height, p.mask.width) != (foreground.height, foreground.width):
            raise ValueError(
                f"prediction is {p.mask.width}x{p.mask.height}, foreground is "
                f"{foreground.width}x{foreground.height}"
            )
        bitmap = p.mask.decode()
        inside = int(np.count_nonzero(bitmap & fg))
        if inside / p.mask.area >= overlap:
            filtered.append(p)
            bitmaps.append(bitmap)
    kept: list[Prediction] = []
    kept_bitmaps: list[np.ndarray] = []
    for i in sort_key(filtered):
        bitmap = bitmaps[i]
        area = filtered[i].mask.area
        suppressed = False
        for other, other_bitmap in zip(kept, kept_bitmaps):
            inter = int(np.count_nonzero(bitmap & other_bitmap))
            union = area + other.mask.area - inter
            if union and inter / union >= nms_iou:
                suppressed = True
                break
        if not suppressed:
            kept.append(filtered[i])
            kept_bitmaps.append(bitmap)
    return kept
