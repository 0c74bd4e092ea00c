"""Point clustering: Euclidean connected components and region growing."""

from __future__ import annotations

import math

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from heapseg._kernels import region_grow_labels
from heapseg.core.masks import InstanceMask
from heapseg.segbase.cloud import OrganizedCloud
from heapseg.segbase.normals import NormalsField
from heapseg.segbase.params import EuclideanParams, RegionGrowingParams


def _order_clusters(groups: list[np.ndarray]) -> list[np.ndarray]:
    """Size descending, ties by smallest member; members ascending."""
    groups = [np.sort(np.asarray(g, dtype=np.int64)) for g in groups]
    groups.sort(key=lambda g: (-g.size, int(g[0])))
    return groups


def euclidean_cluster(cloud: OrganizedCloud, params: EuclideanParams) -> list[np.ndarray]:
    """Connected components of points at distance <= radius.

    Returns clusters of flat pixel indices, filtered to sizes within
    [min_cluster, max_cluster], largest first.
    """
    pts, idx = cloud.valid_points()
    n = pts.shape[0]
    if n == 0:
        return []
    pairs = cKDTree(pts).query_pairs(params.radius, output_type="ndarray")
    graph = coo_matrix(
        (np.ones(len(pairs), dtype=bool), (pairs[:, 0], pairs[:, 1])),
        shape=(n, n),
    )
    n_comp, labels = connected_components(graph, directed=False)
    groups = []
    for comp in range(n_comp):
        members = np.flatnonzero(labels == comp)
        if params.min_cluster <= members.size <= params.max_cluster:
            groups.append(idx[members])
    return _order_clusters(groups)


def region_grow(
    cloud: OrganizedCloud,
    normals: NormalsField,
    params: RegionGrowingParams,
) -> list[np.ndarray]:
    """Grow regions over the k-NN graph by normal-angle agreement.

    Unassigned points seed new regions in ascending-curvature order (ties by
    index). A neighbor q of front point p joins p's region when the angle
    between their normals is at most angle_threshold; q extends the front
    only when its curvature is at most curvature_threshold. Returns clusters
    of flat pixel indices, size >= min_cluster, largest first.
    """
    pts, idx = cloud.valid_points()
    n = pts.shape[0]
    if n == 0:
        return []
    if not np.array_equal(normals.indices, idx):
        raise ValueError("normals were computed for a different cloud")
    kq = min(params.k_neighbors, n)
    _, nbr = cKDTree(pts).query(pts, k=kq)
    nbr = np.ascontiguousarray(np.atleast_2d(nbr).reshape(n, kq), dtype=np.int64)
    order = np.lexsort((np.arange(n), normals.curvature)).astype(np.int64)
    labels = region_grow_labels(
        nbr,
        np.ascontiguousarray(normals.normals, dtype=np.float64),
        np.ascontiguousarray(normals.curvature, dtype=np.float64),
        np.ascontiguousarray(normals.valid, dtype=np.bool_),
        order,
        math.cos(params.angle_threshold),
        float(params.curvature_threshold),
    )
    groups = []
    for lab in range(int(labels.max()) + 1):
        members = np.flatnonzero(labels == lab)
        if members.size >= params.min_cluster:
            groups.append(idx[members])
    return _order_clusters(groups)


def clusters_to_masks(
    clusters: list[np.ndarray], height: int, width: int
) -> list[InstanceMask]:
    """Map flat-pixel-index clusters back to instance masks."""
    masks = []
    for cluster in clusters:
        bitmap = np.zeros(height * width, dtype=bool)
        bitmap[np.asarray(cluster, dtype=np.int64)] = True
        masks.append(InstanceMask.from_bitmap(bitmap.reshape(height, width)))
    return masks
