"""Non-learning segmentation baselines over depth images."""

from heapseg.segbase.cloud import OrganizedCloud, backproject, subtract_background
from heapseg.segbase.cluster import clusters_to_masks, euclidean_cluster, region_grow
from heapseg.segbase.inpaint import inpaint_depth
from heapseg.segbase.normals import NormalsField, estimate_normals
from heapseg.segbase.params import EuclideanParams, RegionGrowingParams, SegParams
from heapseg.segbase.pipeline import METHODS, segment

__all__ = [
    "METHODS",
    "EuclideanParams",
    "NormalsField",
    "OrganizedCloud",
    "RegionGrowingParams",
    "SegParams",
    "backproject",
    "clusters_to_masks",
    "estimate_normals",
    "euclidean_cluster",
    "inpaint_depth",
    "region_grow",
    "segment",
    "subtract_background",
]
