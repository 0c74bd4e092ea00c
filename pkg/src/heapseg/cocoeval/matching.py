"""Greedy prediction-to-ground-truth matching on one image."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from heapseg.core.masks import InstanceMask, iou_matrix


@dataclass(frozen=True)
class Prediction:
    """One predicted instance mask with a confidence score."""

    image_id: int
    mask: InstanceMask
    score: float

    def __post_init__(self):
        if not math.isfinite(self.score):
            raise ValueError(f"score must be finite, got {self.score}")
        if self.mask.area == 0:
            raise ValueError("prediction mask is empty")


def sort_key(preds: list[Prediction]):
    """Indices ordering preds by score desc, area desc, insertion order."""
    return sorted(range(len(preds)), key=lambda i: (-preds[i].score, -preds[i].mask.area, i))


def greedy_match(ious: np.ndarray, iou_threshold: float) -> tuple[np.ndarray, np.ndarray]:
    """Match rows (predictions, already sorted) to columns (ground truth).

    Each row in order takes the still-unmatched column of highest IoU when
    that IoU reaches the threshold; ties go to the lowest column index.
    Returns (per-row TP flags, per-column matched flags).
    """
    n_pred, n_gt = ious.shape
    tp = np.zeros(n_pred, dtype=bool)
    gt_matched = np.zeros(n_gt, dtype=bool)
    for i in range(n_pred):
        if gt_matched.all():
            break
        row = np.where(gt_matched, -1.0, ious[i])
        j = int(np.argmax(row)) if n_gt else 0
        if n_gt and row[j] >= iou_threshold:
            tp[i] = True
            gt_matched[j] = True
    return tp, gt_matched


def match_predictions(
    preds: list[Prediction],
    gts: list[InstanceMask],
    iou_threshold: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Greedy single-image matching.

    ``preds`` must already be sorted by score descending (ties: area
    descending, then insertion order); see :func:`sort_key`. Returns
    per-prediction TP flags and per-GT matched flags.
    """
    ious = iou_matrix([p.mask for p in preds], gts)
    return greedy_match(ious, iou_threshold)
