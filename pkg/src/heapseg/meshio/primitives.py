"""Procedural primitive meshes: test objects plus the bin and table."""

from __future__ import annotations

import numpy as np

from heapseg.core.mesh import TriangleMesh
from heapseg.meshio.backing import BOX_TRIANGLES, box_vertices


def merge_meshes(meshes: list[TriangleMesh], name: str = "") -> TriangleMesh:
    verts = []
    tris = []
    offset = 0
    for m in meshes:
        verts.append(m.vertices)
        tris.append(m.triangles + offset)
        offset += m.num_vertices
    return TriangleMesh(
        vertices=np.vstack(verts), triangles=np.vstack(tris), name=name
    )


def make_box(width: float, depth: float, height: float, center=(0.0, 0.0, 0.0),
             name: str = "box") -> TriangleMesh:
    c = np.asarray(center, dtype=np.float64)
    half = np.array([width, depth, height]) / 2.0
    return TriangleMesh(
        vertices=box_vertices(c - half, c + half),
        triangles=BOX_TRIANGLES.copy(),
        name=name,
    )


def make_cylinder(radius: float, height: float, segments: int = 24,
                  name: str = "cylinder") -> TriangleMesh:
    if segments < 3:
        raise ValueError("cylinder needs at least 3 segments")
    theta = 2.0 * np.pi * np.arange(segments) / segments
    ring = np.column_stack([radius * np.cos(theta), radius * np.sin(theta)])
    bottom = np.column_stack([ring, np.full(segments, -height / 2.0)])
    top = np.column_stack([ring, np.full(segments, height / 2.0)])
    centers = np.array([[0.0, 0.0, -height / 2.0], [0.0, 0.0, height / 2.0]])
    vertices = np.vstack([bottom, top, centers])
    bc = 2 * segments
    tc = 2 * segments + 1
    tris = []
    for k in range(segments):
        k1 = (k + 1) % segments
        # side quad, outward winding
        tris.append((k, k1, segments + k1))
        tris.append((k, segments + k1, segments + k))
        tris.append((bc, k1, k))            # bottom cap, normal -z
        tris.append((tc, segments + k, segments + k1))  # top cap, normal +z
    return TriangleMesh(
        vertices=vertices, triangles=np.array(tris, dtype=np.int64), name=name
    )


def make_tetrahedron(edge: float, name: str = "tetrahedron") -> TriangleMesh:
    s = edge / (2.0 * np.sqrt(2.0))
    vertices = s * np.array(
        [
            [1.0, 1.0, 1.0],
            [1.0, -1.0, -1.0],
            [-1.0, 1.0, -1.0],
            [-1.0, -1.0, 1.0],
        ]
    )
    triangles = np.array(
        [(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)], dtype=np.int64
    )
    return TriangleMesh(vertices=vertices, triangles=triangles, name=name)


def make_wedge(width: float, depth: float, height: float,
               name: str = "wedge") -> TriangleMesh:
    """Right-triangular prism: vertical face at x=0, slope down to x=width."""
    v = np.array(
        [
            [0.0, 0.0, 0.0],
            [width, 0.0, 0.0],
            [width, depth, 0.0],
            [0.0, depth, 0.0],
            [0.0, 0.0, height],
            [0.0, depth, height],
        ]
    )
    v -= np.array([width, depth, height]) / 2.0
    triangles = np.array(
        [
            (0, 2, 1),
            (0, 3, 2),
            (0, 4, 5),
            (0, 5, 3),
            (0, 1, 4),
            (3, 5, 2),
            (1, 2, 5),
            (1, 5, 4),
        ],
        dtype=np.int64,
    )
    return TriangleMesh(vertices=v, triangles=triangles, name=name)


def make_bin(width: float, depth: float, height: float, wall: float,
             name: str = "bin") -> TriangleMesh:
    """Open-top bin. Interior floor is z=0 over x,y in [-W/2,W/2]x[-D/2,D/2]."""
    w2, d2 = width / 2.0, depth / 2.0
    parts = [
        make_box(width + 2 * wall, depth + 2 * wall, wall, (0.0, 0.0, -wall / 2.0)),
        make_box(wall, depth + 2 * wall, height, (-w2 - wall / 2.0, 0.0, height / 2.0)),
        make_box(wall, depth + 2 * wall, height, (w2 + wall / 2.0, 0.0, height / 2.0)),
        make_box(width + 2 * wall, wall, height, (0.0, -d2 - wall / 2.0, height / 2.0)),
        make_box(width + 2 * wall, wall, height, (0.0, d2 + wall / 2.0, height / 2.0)),
    ]
    return merge_meshes(parts, name=name)


def make_table(size: float, thickness: float, top_z: float,
               name: str = "table") -> TriangleMesh:
    return make_box(size, size, thickness, (0.0, 0.0, top_z - thickness / 2.0), name=name)
