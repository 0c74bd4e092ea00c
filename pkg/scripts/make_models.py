"""Regenerate the bundled primitive model library under models/.

Run from the repository root:

    python3 scripts/make_models.py

The library is small on purpose: eight convex-ish rigid parts whose sizes
roughly match warehouse picking items at the default bin scale (0.4 m x
0.4 m). Sizes are chosen so heaps of ~7 parts fit the bin and each visible
instance covers a low single-digit percentage of a 512x384 frame.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from heapseg.core.mesh import TriangleMesh
from heapseg.meshio.primitives import (
    make_box,
    make_cylinder,
    make_tetrahedron,
    make_wedge,
)

OUT_DIR = Path(__file__).resolve().parents[1] / "models"

MODELS = [
    ("box_a", make_box(0.09, 0.06, 0.045)),
    ("box_b", make_box(0.075, 0.075, 0.075)),
    ("box_c", make_box(0.11, 0.05, 0.03)),
    ("cyl_a", make_cylinder(0.03, 0.10)),
    ("cyl_b", make_cylinder(0.045, 0.05)),
    ("tet_a", make_tetrahedron(0.09)),
    ("wedge_a", make_wedge(0.09, 0.06, 0.05)),
    ("wedge_b", make_wedge(0.07, 0.07, 0.035)),
]


def dump_obj(mesh: TriangleMesh) -> str:
    lines = [f"# {mesh.name}", f"o {mesh.name}"]
    for x, y, z in mesh.vertices:
        lines.append(f"v {float(x)!r} {float(y)!r} {float(z)!r}")
    for a, b, c in mesh.triangles + 1:
        lines.append(f"f {a} {b} {c}")
    return "\n".join(lines) + "\n"


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    manifest = {"models": []}
    for model_id, mesh in MODELS:
        path = OUT_DIR / f"{model_id}.obj"
        path.write_text(dump_obj(mesh))
        manifest["models"].append({"id": model_id, "path": path.name})
        print(f"wrote {path} ({mesh.num_vertices} verts, {len(mesh.triangles)} tris)")
    (OUT_DIR / "models.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"wrote {OUT_DIR / 'models.json'}")


if __name__ == "__main__":
    main()
