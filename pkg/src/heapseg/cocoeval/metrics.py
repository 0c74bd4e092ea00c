"""COCO-style AP/AR/PR metrics over instance masks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from heapseg.core.masks import InstanceMask, iou_matrix
from heapseg.cocoeval.matching import Prediction, greedy_match, sort_key
from heapseg.errors import EvaluationError

IOU_THRESHOLDS = (0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95)

# COCO 101-point interpolation grid; arange keeps each point exact in binary
RECALL_POINTS = np.arange(101) / 100.0


@dataclass(frozen=True)
class EvalReport:
    """Mask AP/AR summary plus the interpolated per-threshold curves."""

    ap: float
    ap50: float | None
    ap75: float | None
    ar100: float
    thresholds: tuple[float, ...]
    per_threshold_ap: tuple[float, ...]
    interpolated_precision: tuple[tuple[float, ...], ...]
    num_gt: int
    num_pred: int

    def __post_init__(self):
        values = [self.ap, self.ar100, *self.per_threshold_ap]
        values += [v for v in (self.ap50, self.ap75) if v is not None]
        for v in values:
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"metric {v} outside [0, 1]")
        if self.ap50 is not None and self.ap > self.ap50 + 1e-12:
            raise ValueError(f"AP {self.ap} exceeds AP@0.50 {self.ap50}")
        if len(self.per_threshold_ap) != len(self.thresholds):
            raise ValueError("one AP value required per threshold")

    def to_json(self) -> dict:
        return {
            "ap": self.ap,
            "ap50": self.ap50,
            "ap75": self.ap75,
            "ar100": self.ar100,
            "thresholds": list(self.thresholds),
            "per_threshold_ap": list(self.per_threshold_ap),
            "interpolated_precision": [list(row) for row in self.interpolated_precision],
            "num_gt": self.num_gt,
            "num_pred": self.num_pred,
        }


def format_report(report: EvalReport) -> str:
    """Human-readable metric table."""
    lines = [
        f"{'AP':<22}{report.ap:.4f}",
        f"{'AP@0.50':<22}{report.ap50:.4f}" if report.ap50 is not None else f"{'AP@0.50':<22}-",
        f"{'AP@0.75':<22}{report.ap75:.4f}" if report.ap75 is not None else f"{'AP@0.75':<22}-",
        f"{'AR@100':<22}{report.ar100:.4f}",
        f"{'ground truth':<22}{report.num_gt}",
        f"{'predictions':<22}{report.num_pred}",
    ]
    for t, ap_t in zip(report.thresholds, report.per_threshold_ap):
        lines.append(f"{f'AP@{t:.2f}':<22}{ap_t:.4f}")
    return "\n".join(lines)


def _prepare(preds: Sequence[Prediction], gts: Mapping[int, list[InstanceMask]]):
    """Per-image sorted prediction order and IoU matrices, computed once."""
    num_gt = sum(len(v) for v in gts.values())
    if num_gt == 0:
        raise EvaluationError("empty ground truth")
    by_image: dict[int, list[int]] = {}
    for i, p in enumerate(preds):
        by_image.setdefault(p.image_id, []).append(i)
    images = []
    for image_id in sorted(set(by_image) | set(gts.keys())):
        idxs = by_image.get(image_id, [])
        idxs = sorted(idxs, key=lambda i: (-preds[i].score, -preds[i].mask.area, i))
        gt_list = list(gts.get(image_id, []))
        ious = iou_matrix([preds[i].mask for i in idxs], gt_list)
        images.append((idxs, ious))
    return images, num_gt


def _pooled_flags(preds, images, threshold: float, max_detections: int):
    """Pooled TP flags in global sort order, plus capped matched-GT count."""
    entries = []
    matched = 0
    for idxs, ious in images:
        tp, _ = greedy_match(ious, threshold)
        for row, i in enumerate(idxs):
            entries.append((-preds[i].score, -preds[i].mask.area, i, tp[row]))
        _, gt_capped = greedy_match(ious[:max_detections], threshold)
        matched += int(gt_capped.sum())
    entries.sort()
    flags = np.array([e[3] for e in entries], dtype=bool)
    return flags, matched


def _interpolate(flags: np.ndarray, num_gt: int) -> np.ndarray:
    """101-point interpolated precision with the monotone envelope."""
    if flags.size == 0:
        return np.zeros(101)
    tp_cum = np.cumsum(flags)
    precision = tp_cum / np.arange(1, flags.size + 1)
    recall = tp_cum / num_gt
    envelope = np.maximum.accumulate(precision[::-1])[::-1]
    pos = np.searchsorted(recall, RECALL_POINTS, side="left")
    out = np.zeros(101)
    hit = pos < flags.size
    out[hit] = envelope[pos[hit]]
    return out


def evaluate(
    preds: Sequence[Prediction],
    gts: Mapping[int, list[InstanceMask]],
    thresholds: Sequence[float] = IOU_THRESHOLDS,
    max_detections: int = 100,
) -> EvalReport:
    """Full report: AP per threshold and averaged, AR@100, curves."""
    thresholds = tuple(float(t) for t in thresholds)
    images, num_gt = _prepare(preds, gts)
    ap_per_t = []
    interp_rows = []
    recall_per_t = []
    for t in thresholds:
        flags, matched = _pooled_flags(preds, images, t, max_detections)
        interp = _interpolate(flags, num_gt)
        ap_per_t.append(float(interp.mean()))
        interp_rows.append(tuple(float(v) for v in interp))
        recall_per_t.append(matched / num_gt)
    by_t = dict(zip(thresholds, ap_per_t))
    return EvalReport(
        ap=float(np.mean(ap_per_t)),
        ap50=by_t.get(0.50),
        ap75=by_t.get(0.75),
        ar100=float(np.mean(recall_per_t)),
        thresholds=thresholds,
        per_threshold_ap=tuple(ap_per_t),
        interpolated_precision=tuple(interp_rows),
        num_gt=num_gt,
        num_pred=len(preds),
    )


def average_precision(
    preds: Sequence[Prediction],
    gts: Mapping[int, list[InstanceMask]],
    thresholds: Sequence[float] = IOU_THRESHOLDS,
) -> EvalReport:
    """AP over the given thresholds; the report carries all fields."""
    return evaluate(preds, gts, thresholds=thresholds)


def average_recall(
    preds: Sequence[Prediction],
    gts: Mapping[int, list[InstanceMask]],
    max_detections: int = 100,
) -> float:
    """Mean over IoU thresholds of matched-GT fraction, top-N per image."""
    images, num_gt = _prepare(preds, gts)
    recalls = []
    for t in IOU_THRESHOLDS:
        _, matched = _pooled_flags(preds, images, t, max_detections)
        recalls.append(matched / num_gt)
    return float(np.mean(recalls))


def pr_curve(
    preds: Sequence[Prediction],
    gts: Mapping[int, list[InstanceMask]],
    iou: float = 0.5,
) -> list[tuple[float, float]]:
    """Raw (recall, precision) sequence over the globally sorted pool."""
    images, num_gt = _prepare(preds, gts)
    flags, _ = _pooled_flags(preds, images, float(iou), max_detections=len(preds) or 1)
    tp_cum = np.cumsum(flags)
    points = []
    for k in range(flags.size):
        points.append((float(tp_cum[k] / num_gt), float(tp_cum[k] / (k + 1))))
    return points


def pr_curve_csv(points: Sequence[tuple[float, float]]) -> str:
    """CSV rendering of pr_curve output, header included."""
    lines = ["recall,precision"]
    for recall, precision in points:
        lines.append(f"{recall!r},{precision!r}")
    return "\n".join(lines) + "\n"
