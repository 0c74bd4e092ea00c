"""Dataset collection statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from heapseg.core.annotations import AnnotationSet
from heapseg.errors import EvaluationError

AREA_HIST_BINS = 20


@dataclass(frozen=True)
class DatasetStats:
    """Per-dataset summary numbers plus plot-ready histograms."""

    num_images: int
    num_instances: int
    mean_instances_per_image: float
    mean_instance_area_fraction: float
    count_histogram: tuple[tuple[int, int], ...]
    area_fraction_edges: tuple[float, ...]
    area_fraction_counts: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "num_images": self.num_images,
            "num_instances": self.num_instances,
            "mean_instances_per_image": self.mean_instances_per_image,
            "mean_instance_area_fraction": self.mean_instance_area_fraction,
            "count_histogram": [list(pair) for pair in self.count_histogram],
            "area_fraction_histogram": {
                "edges": list(self.area_fraction_edges),
                "counts": list(self.area_fraction_counts),
            },
        }


def dataset_stats(annotations: AnnotationSet) -> DatasetStats:
    """Instance-count and area-fraction statistics over an annotation set."""
    if not annotations.images:
        raise EvaluationError("annotation set has no images")
    counts = np.array([len(img.instances) for img in annotations.images])
    fractions = np.array(
        [
            inst.area / (img.width * img.height)
            for img in annotations.images
            for inst in img.instances
        ]
    )
    count_hist = tuple(
        (k, int(np.count_nonzero(counts == k))) for k in range(int(counts.max()) + 1)
    )
    if fractions.size:
        hist, edges = np.histogram(
            fractions, bins=AREA_HIST_BINS, range=(0.0, float(fractions.max()))
        )
        mean_fraction = float(fractions.mean())
    else:
        hist, edges = np.histogram([], bins=AREA_HIST_BINS, range=(0.0, 1.0))
        mean_fraction = 0.0
    return DatasetStats(
        num_images=annotations.num_images,
        num_instances=annotations.num_instances,
        mean_instances_per_image=float(counts.mean()),
        mean_instance_area_fraction=mean_fraction,
        count_histogram=count_hist,
        area_fraction_edges=tuple(float(e) for e in edges),
        area_fraction_counts=tuple(int(c) for c in hist),
    )
