"""COCO-style evaluation of instance masks."""

from heapseg.cocoeval.matching import (
    Prediction,
    greedy_match,
    match_predictions,
    sort_key,
)
from heapseg.cocoeval.metrics import (
    IOU_THRESHOLDS,
    RECALL_POINTS,
    EvalReport,
    average_precision,
    average_recall,
    evaluate,
    format_report,
    pr_curve,
    pr_curve_csv,
)
from heapseg.cocoeval.postproc import filter_and_nms
from heapseg.cocoeval.stats import DatasetStats, dataset_stats

__all__ = [
    "IOU_THRESHOLDS",
    "RECALL_POINTS",
    "DatasetStats",
    "EvalReport",
    "Prediction",
    "average_precision",
    "average_recall",
    "dataset_stats",
    "evaluate",
    "filter_and_nms",
    "format_report",
    "greedy_match",
    "match_predictions",
    "pr_curve",
    "pr_curve_csv",
    "sort_key",
]
