"""Quasi-static stable resting poses from the convex hull.

A pose is kept for every hull facet whose support polygon contains the
projected center of mass (strictly, with a 1e-6 m margin); its rotation
aligns the facet's outward normal with -z so the object rests on it.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull
from scipy.spatial import QhullError

from heapseg.core.geometry import rotation_between
from heapseg.core.mesh import TriangleMesh
from heapseg.errors import MeshError

# COM projection must clear every support-polygon edge by this much (meters).
SUPPORT_MARGIN = 1e-6
# Hull simplices whose plane equations agree within this are one facet.
_PLANE_TOL = 1e-8


def center_of_mass(mesh: TriangleMesh) -> np.ndarray:
    """Center of mass of the uniform solid bounded by the mesh.

    Uses signed tetrahedron decomposition against the origin; meshes that
    enclose no volume (open or flat) fall back to the area-weighted surface
    centroid, and zero-area soups to the vertex mean.
    """
    c = mesh.triangle_corners()
    if not len(c):
        raise MeshError("empty mesh has no center of mass")
    cross = np.cross(c[:, 1], c[:, 2])
    vols = np.einsum("ij,ij->i", c[:, 0], cross) / 6.0
    total = vols.sum()
    if abs(total) > 1e-12:
        centroids = c.sum(axis=1) / 4.0
        return (vols[:, None] * centroids).sum(axis=0) / total
    areas = 0.5 * np.linalg.norm(np.cross(c[:, 1] - c[:, 0], c[:, 2] - c[:, 0]), axis=1)
    if areas.sum() > 1e-12:
        centroids = c.mean(axis=1)
        return (areas[:, None] * centroids).sum(axis=0) / areas.sum()
    return mesh.vertices.mean(axis=0)


def _merge_coplanar(hull: ConvexHull) -> list[dict]:
    """Group hull simplices into planar facets via their plane equations."""
    eqs = hull.equations
    n = len(eqs)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(eqs[i, 3] - eqs[j, 3]) > _PLANE_TOL:
                continue
            if float(np.dot(eqs[i, :3], eqs[j, :3])) > 1.0 - _PLANE_TOL:
                parent[find(j)] = find(i)

    groups: dict[int, dict] = {}
    for i in range(n):
        root = find(i)
        g = groups.setdefault(root, {"simplices": [], "vertex_ids": set()})
        g["simplices"].append(i)
        g["vertex_ids"].update(int(v) for v in hull.simplices[i])
    # deterministic facet order: by smallest member simplex index
    ordered = sorted(groups.values(), key=lambda g: g["simplices"][0])
    for g in ordered:
        first = g["simplices"][0]
        g["normal"] = eqs[first, :3].copy()
        g["offset"] = float(eqs[first, 3])
    return ordered


def _facet_frame(normal: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ref = np.array([0.0, 0.0, 1.0]) if abs(normal[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    t1 = np.cross(normal, ref)
    t1 = t1 / np.linalg.norm(t1)
    return t1, np.cross(normal, t1)


def compute_stable_poses(
    mesh: TriangleMesh, weighting: str = "area"
) -> list[tuple[np.ndarray, float]]:
    """Stable resting rotations with probabilities summing to 1.

    ``weighting`` is "area" (probability proportional to facet area) or
    "uniform". Raises on degenerate hulls.
    """
    if weighting not in ("area", "uniform"):
        raise ValueError(f"unknown weighting {weighting!r}")
    try:
        hull = ConvexHull(mesh.vertices)
    except (QhullError, ValueError) as exc:
        raise MeshError(f"flat mesh: convex hull is degenerate ({exc})") from None

    com = center_of_mass(mesh)
    points = mesh.vertices
    poses: list[tuple[np.ndarray, float]] = []
    for facet in _merge_coplanar(hull):
        normal = facet["normal"]
        t1, t2 = _facet_frame(normal)
        ids = sorted(facet["vertex_ids"])
        pts2 = np.column_stack(
            [points[ids] @ t1, points[ids] @ t2]
        )
        com2 = np.array([float(com @ t1), float(com @ t2)])
        try:
            poly = ConvexHull(pts2)
        except (QhullError, ValueError):
            continue
        verts2 = pts2[poly.vertices]  # counter-clockwise
        inside = True
        for i in range(len(verts2)):
            a = verts2[i]
            b = verts2[(i + 1) % len(verts2)]
            edge = b - a
            length = float(np.hypot(edge[0], edge[1]))
            if length == 0.0:
                continue
            signed = (edge[0] * (com2[1] - a[1]) - edge[1] * (com2[0] - a[0])) / length
            if signed < SUPPORT_MARGIN:
                inside = False
                break
        if not inside:
            continue
        area = poly.volume  # 2-D hull: "volume" is the polygon area
        rotation = rotation_between(normal, np.array([0.0, 0.0, -1.0]))
        poses.append((rotation, float(area)))

    if not poses:
        raise MeshError("no stable pose: center of mass clears no support polygon")
    if weighting == "uniform":
        weights = np.ones(len(poses))
    else:
        weights = np.array([w for _, w in poses])
    weights = weights / weights.sum()
    return [(rot, float(w)) for (rot, _), w in zip(poses, weights)]
