"""Binary STL parsing with bit-exact vertex deduplication."""

from __future__ import annotations

import struct

import numpy as np

from heapseg.core.mesh import TriangleMesh, drop_degenerate_triangles
from heapseg.errors import MeshParseError

_HEADER_BYTES = 80
_RECORD = np.dtype(
    [
        ("normal", "<f4", (3,)),
        ("vertices", "<f4", (3, 3)),
        ("attr", "<u2"),
    ]
)


def load_stl(data: bytes, name: str = "") -> TriangleMesh:
    """Parse binary STL bytes (80-byte header, uint32 count, 50-byte records).

    Raw vertices are deduplicated by exact bit equality of their float32
    coordinates, keeping first-appearance order. Facet normals are ignored.
    """
    if len(data) < _HEADER_BYTES + 4:
        raise MeshParseError("truncated file: shorter than an STL header")
    (count,) = struct.unpack_from("<I", data, _HEADER_BYTES)
    expected = _HEADER_BYTES + 4 + 50 * count
    if len(data) != expected:
        raise MeshParseError(
            f"record count mismatch: header declares {count} triangles "
            f"({expected} bytes) but file holds {len(data)} bytes"
        )
    if count == 0:
        return TriangleMesh(
            vertices=np.zeros((0, 3), np.float64),
            triangles=np.zeros((0, 3), np.int64),
            name=name,
        )

    records = np.frombuffer(data, dtype=_RECORD, count=count, offset=_HEADER_BYTES + 4)
    raw = np.ascontiguousarray(records["vertices"]).reshape(-1, 3)
    bits = raw.view(np.uint32)
    _, first_idx, inverse = np.unique(bits, axis=0, return_index=True, return_inverse=True)
    # np.unique sorts lexicographically; remap to first-appearance order
    appearance = np.argsort(first_idx, kind="stable")
    rank = np.empty(len(appearance), dtype=np.int64)
    rank[appearance] = np.arange(len(appearance))
    vertices = raw[first_idx[appearance]].astype(np.float64)
    triangles = rank[inverse.reshape(-1)].reshape(-1, 3)
    triangles = drop_degenerate_triangles(vertices, triangles)
    return TriangleMesh(vertices=vertices, triangles=triangles, name=name)
