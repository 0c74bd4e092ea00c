"""ASCII OBJ parsing: v/f records only, polygons fan-triangulated."""

from __future__ import annotations

import numpy as np

from heapseg.core.mesh import TriangleMesh, drop_degenerate_triangles
from heapseg.errors import MeshParseError


def _face_vertex_index(token: str, n_vertices: int, line_no: int) -> int:
    # face tokens may carry texture/normal refs: "v", "v/t", "v//n", "v/t/n"
    head = token.split("/", 1)[0]
    try:
        idx = int(head)
    except ValueError:
        raise MeshParseError(f"malformed face index {token!r}", line=line_no) from None
    if idx > 0:
        idx -= 1
    elif idx < 0:
        idx += n_vertices
    else:
        raise MeshParseError("face index 0 is not allowed", line=line_no)
    if not (0 <= idx < n_vertices):
        raise MeshParseError(
            f"face index {token!r} out of range (have {n_vertices} vertices)",
            line=line_no,
        )
    return idx


def load_obj(data: bytes, name: str = "") -> TriangleMesh:
    """Parse ASCII OBJ bytes into a mesh, preserving vertex order.

    Only ``v`` and ``f`` records are consumed. Polygonal faces become a
    triangle fan. Zero-area triangles are dropped after parsing.
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MeshParseError(f"not ASCII/UTF-8 text: {exc}") from None

    vertices: list[tuple[float, float, float]] = []
    triangles: list[tuple[int, int, int]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        record = parts[0]
        if record == "v":
            if len(parts) < 4:
                raise MeshParseError("vertex needs 3 coordinates", line=line_no)
            try:
                x, y, z = float(parts[1]), float(parts[2]), float(parts[3])
            except ValueError:
                raise MeshParseError(
                    f"malformed vertex coordinate in {line!r}", line=line_no
                ) from None
            vertices.append((x, y, z))
        elif record == "f":
            tokens = parts[1:]
            if len(tokens) < 3:
                raise MeshParseError("face with fewer than 3 vertices", line=line_no)
            idx = [_face_vertex_index(t, len(vertices), line_no) for t in tokens]
            for i in range(1, len(idx) - 1):
                triangles.append((idx[0], idx[i], idx[i + 1]))
        # every other record type (vn, vt, usemtl, o, g, s, mtllib, ...) is ignored

    verts = np.asarray(vertices, dtype=np.float64).reshape(-1, 3)
    tris = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
    tris = drop_degenerate_triangles(verts, tris)
    return TriangleMesh(vertices=verts, triangles=tris, name=name)
