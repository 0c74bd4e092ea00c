"""End-to-end depth-image segmentation baselines."""

from __future__ import annotations

from heapseg.core.camera import CameraIntrinsics
from heapseg.core.image import DepthImage
from heapseg.core.masks import InstanceMask
from heapseg.segbase.cloud import backproject, subtract_background
from heapseg.segbase.cluster import clusters_to_masks, euclidean_cluster, region_grow
from heapseg.segbase.inpaint import inpaint_depth
from heapseg.segbase.normals import estimate_normals
from heapseg.segbase.params import SegParams

METHODS = ("euclidean", "region_growing")


def segment(
    img: DepthImage,
    intrinsics: CameraIntrinsics,
    background: DepthImage,
    params: SegParams,
    method: str,
) -> list[tuple[InstanceMask, float]]:
    """Segment instances in a depth image against a known empty background.

    Inpaints holes, keeps pixels more than background_delta above the
    background, backprojects them, clusters with the chosen method, and
    returns (mask, score) pairs ordered by area descending. Baseline masks
    carry no confidence model; every score is 1.0.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    filled = inpaint_depth(img)
    foreground = subtract_background(filled, background, params.background_delta)
    cloud = backproject(filled, intrinsics).restricted(foreground.decode())
    if method == "euclidean":
        clusters = euclidean_cluster(cloud, params.euclidean)
    else:
        normals = estimate_normals(cloud, params.region_growing.k_neighbors)
        clusters = region_grow(cloud, normals, params.region_growing)
    masks = clusters_to_masks(clusters, img.height, img.width)
    return [(mask, 1.0) for mask in masks]
