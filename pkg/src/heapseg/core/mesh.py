"""Triangle mesh container."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Triangles with area at or below this are treated as degenerate by parsers.
DEGENERATE_AREA = 1e-14


@dataclass(frozen=True)
class TriangleMesh:
    """Indexed triangle soup in the object frame, units of meters."""

    vertices: np.ndarray
    triangles: np.ndarray
    name: str = field(default="", compare=False)

    def __post_init__(self):
        v = np.ascontiguousarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        t = np.ascontiguousarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        if t.size and (t.min() < 0 or t.max() >= len(v)):
            raise ValueError("triangle index out of range")
        v.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "triangles", t)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_triangles(self) -> int:
        return len(self.triangles)

    def triangle_corners(self) -> np.ndarray:
        """Vertex positions per triangle, shape (T, 3, 3)."""
        return self.vertices[self.triangles]

    def triangle_areas(self) -> np.ndarray:
        c = self.triangle_corners()
        cross = np.cross(c[:, 1] - c[:, 0], c[:, 2] - c[:, 0])
        return 0.5 * np.linalg.norm(cross, axis=1)

    def aabb(self) -> tuple[np.ndarray, np.ndarray]:
        if not len(self.vertices):
            raise ValueError("empty mesh has no bounding box")
        return self.vertices.min(axis=0), self.vertices.max(axis=0)


def drop_degenerate_triangles(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    """Return the subset of triangles with positive area."""
    tri = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
    if not len(tri):
        return tri
    v = np.asarray(vertices, dtype=np.float64)
    c = v[tri]
    cross = np.cross(c[:, 1] - c[:, 0], c[:, 2] - c[:, 0])
    areas = 0.5 * np.linalg.norm(cross, axis=1)
    return tri[areas > DEGENERATE_AREA]
