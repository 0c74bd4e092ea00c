"""Surface normals and curvature from k-nearest-neighbor PCA."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from heapseg.segbase.cloud import OrganizedCloud


@dataclass(frozen=True)
class NormalsField:
    """Per-point normals over a cloud's valid points, in valid-point order.

    ``indices`` holds each point's flat row-major pixel index, tying rows
    back to the source cloud. Rows with ``valid`` False carry no estimate.
    """

    normals: np.ndarray
    curvature: np.ndarray
    valid: np.ndarray
    indices: np.ndarray

    def __post_init__(self):
        n = self.indices.shape[0]
        if self.normals.shape != (n, 3) or self.curvature.shape != (n,) or self.valid.shape != (n,):
            raise ValueError("normals/curvature/valid/indices lengths disagree")


def estimate_normals(cloud: OrganizedCloud, k: int) -> NormalsField:
    """PCA normals over each valid point's k nearest valid points.

    The neighborhood includes the point itself. The normal is the smallest
    covariance eigenvector, flipped to face the camera at the origin;
    curvature is lambda_0 / (lambda_0 + lambda_1 + lambda_2). Clouds with
    fewer than 3 valid points get no estimates at all.
    """
    if k < 3:
        raise ValueError(f"k must be >= 3, got {k}")
    pts, idx = cloud.valid_points()
    n = pts.shape[0]
    if n < 3:
        return NormalsField(
            normals=np.zeros((n, 3)),
            curvature=np.zeros(n),
            valid=np.zeros(n, dtype=bool),
            indices=idx,
        )
    kq = min(k, n)
    tree = cKDTree(pts)
    _, nbr = tree.query(pts, k=kq)
    neighborhoods = pts[nbr]
    mean = neighborhoods.mean(axis=1)
    centered = neighborhoods - mean[:, None, :]
    cov = np.einsum("pki,pkj->pij", centered, centered) / kq
    evals, evecs = np.linalg.eigh(cov)  # ascending eigenvalues
    normals = evecs[:, :, 0].copy()
    flip = np.einsum("pi,pi->p", normals, pts) > 0.0
    normals[flip] = -normals[flip]
    lam = np.clip(evals, 0.0, None)  # eigh can return tiny negatives
    total = lam.sum(axis=1)
    curvature = np.divide(
        lam[:, 0], total, out=np.zeros(n), where=total > 0.0
    )
    return NormalsField(
        normals=normals,
        curvature=curvature,
        valid=np.ones(n, dtype=bool),
        indices=idx,
    )
