"""Backing-slab augmentation: a rectangular plate glued under a mesh."""

from __future__ import annotations

import numpy as np

from heapseg.core.mesh import TriangleMesh

# Outward-wound triangles of a canonical box whose vertex i has coordinates
# ((i >> 0) & 1, (i >> 1) & 1, (i >> 2) & 1) over the unit cube corners.
BOX_TRIANGLES = np.array(
    [
        (0, 2, 3),
        (0, 3, 1),
        (4, 5, 7),
        (4, 7, 6),
        (0, 1, 5),
        (0, 5, 4),
        (3, 2, 6),
        (3, 6, 7),
        (0, 4, 6),
        (0, 6, 2),
        (1, 3, 7),
        (1, 7, 5),
    ],
    dtype=np.int64,
)


def box_vertices(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Corners of the axis-aligned box [lo, hi], ordered by bit pattern."""
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    corners = np.empty((8, 3))
    for i in range(8):
        corners[i] = [
            hi[0] if i & 1 else lo[0],
            hi[1] if i & 2 else lo[1],
            hi[2] if i & 4 else lo[2],
        ]
    return corners


def augment_with_backing(mesh: TriangleMesh, thickness: float) -> TriangleMesh:
    """Append a slab of ``thickness`` under the mesh's -z bounding rectangle.

    Triangle-soup union, no CSG: the slab spans the mesh's (x, y) bounding
    rectangle and sits flush against its lowest z.
    """
    if thickness <= 0:
        raise ValueError("backing thickness must be positive")
    lo, hi = mesh.aabb()
    slab_lo = np.array([lo[0], lo[1], lo[2] - thickness])
    slab_hi = np.array([hi[0], hi[1], lo[2]])
    slab_verts = box_vertices(slab_lo, slab_hi)
    vertices = np.vstack([mesh.vertices, slab_verts])
    triangles = np.vstack([mesh.triangles, BOX_TRIANGLES + mesh.num_vertices])
    return TriangleMesh(vertices=vertices, triangles=triangles, name=mesh.name)
