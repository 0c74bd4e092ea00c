"""Model database: meshes plus per-model precomputed settling data."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from heapseg.core.mesh import TriangleMesh
from heapseg.errors import ConfigError, MeshError, MeshParseError
from heapseg.meshio.backing import augment_with_backing
from heapseg.meshio.obj import load_obj
from heapseg.meshio.stl import load_stl
from heapseg.meshio.stable import center_of_mass, compute_stable_poses

MANIFEST_NAME = "models.json"
DEFAULT_BACKING_THICKNESS = 0.01


@dataclass(frozen=True)
class ModelEntry:
    model_id: str
    mesh: TriangleMesh
    center_of_mass: np.ndarray
    stable_poses: tuple[tuple[np.ndarray, float], ...]


def _load_mesh_file(path: Path) -> TriangleMesh:
    suffix = path.suffix.lower()
    data = path.read_bytes()
    if suffix == ".obj":
        return load_obj(data, name=path.stem)
    if suffix == ".stl":
        return load_stl(data, name=path.stem)
    raise MeshParseError(f"unsupported mesh format {suffix!r} ({path.name})")


class ModelDatabase:
    """Read-only ordered collection of models, lexicographic by id."""

    def __init__(self, entries: list[ModelEntry]):
        entries = sorted(entries, key=lambda e: e.model_id)
        ids = [e.model_id for e in entries]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ConfigError(f"duplicate model ids: {dupes}")
        self._entries = tuple(entries)
        self._by_id = {e.model_id: e for e in entries}

    @property
    def entries(self) -> tuple[ModelEntry, ...]:
        return self._entries

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(e.model_id for e in self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, model_id: str) -> bool:
        return model_id in self._by_id

    def get(self, model_id: str) -> ModelEntry:
        try:
            return self._by_id[model_id]
        except KeyError:
            raise ConfigError(f"unknown model id {model_id!r}") from None

    def subset(self, model_ids) -> "ModelDatabase":
        return ModelDatabase([self.get(m) for m in model_ids])

    @classmethod
    def load(cls, directory) -> "ModelDatabase":
        """Load from ``directory/models.json``; fall back to scanning.

        The manifest is a JSON document {"models": [{"id", "path",
        "backing"?: bool, "backing_thickness"?: float}, ...]} with paths
        relative to the directory. Without one, every *.obj/*.stl file is
        loaded under its stem as id.
        """
        directory = Path(directory)
        if not directory.is_dir():
            raise ConfigError(f"model directory {directory} does not exist")
        manifest_path = directory / MANIFEST_NAME
        specs: list[dict] = []
        if manifest_path.is_file():
            try:
                doc = json.loads(manifest_path.read_text())
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{manifest_path}: {exc}") from None
            models = doc.get("models")
            if not isinstance(models, list):
                raise ConfigError(f'{manifest_path}: expected a "models" array')
            for rec in models:
                if not isinstance(rec, dict) or "id" not in rec or "path" not in rec:
                    raise ConfigError(
                        f'{manifest_path}: each model needs "id" and "path"'
                    )
                specs.append(rec)
        else:
            for path in sorted(directory.glob("*")):
                if path.suffix.lower() in (".obj", ".stl"):
                    specs.append({"id": path.stem, "path": path.name})
        if not specs:
            raise ConfigError(f"no models found in {directory}")

        entries = []
        for rec in specs:
            mid = str(rec["id"])
            path = directory / rec["path"]
            if not path.is_file():
                raise ConfigError(f"model {mid!r}: file {path} does not exist")
            try:
                mesh = _load_mesh_file(path)
                if rec.get("backing"):
                    thickness = float(rec.get("backing_thickness", DEFAULT_BACKING_THICKNESS))
                    mesh = augment_with_backing(mesh, thickness)
                com = center_of_mass(mesh)
                poses = tuple(compute_stable_poses(mesh))
            except (MeshError, MeshParseError) as exc:
                raise type(exc)(f"model {mid!r}: {exc}") from None
            entries.append(
                ModelEntry(
                    model_id=mid, mesh=mesh, center_of_mass=com, stable_poses=poses
                )
            )
        return cls(entries)
