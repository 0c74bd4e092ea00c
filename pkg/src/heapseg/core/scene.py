"""Ground-truth world state: object instances plus camera."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from heapseg.core.camera import CameraModel
from heapseg.core.geometry import RigidTransform

ObjectKind = Literal["foreground", "background"]


@dataclass(frozen=True)
class ObjectInstance:
    """One posed mesh in the scene. Background objects never receive masks."""

    mesh_id: str
    pose: RigidTransform
    kind: ObjectKind = "foreground"

    def __post_init__(self):
        if self.kind not in ("foreground", "background"):
            raise ValueError(f"unknown object kind {self.kind!r}")


@dataclass(frozen=True)
class SceneState:
    """Complete ground truth for one rendered image."""

    foreground: tuple[ObjectInstance, ...]
    background: tuple[ObjectInstance, ...]
    camera: CameraModel
    rng_seed: int

    def __post_init__(self):
        object.__setattr__(self, "foreground", tuple(self.foreground))
        object.__setattr__(self, "background", tuple(self.background))
        if any(o.kind != "foreground" for o in self.foreground):
            raise ValueError("foreground list contains a non-foreground instance")
        if any(o.kind != "background" for o in self.background):
            raise ValueError("background list contains a non-background instance")

    @property
    def num_foreground(self) -> int:
        return len(self.foreground)

    def with_only(self, index: int) -> "SceneState":
        """Scene containing a single foreground object and nothing else."""
        if not (0 <= index < len(self.foreground)):
            raise IndexError(f"foreground index {index} out of range")
        return SceneState(
            foreground=(self.foreground[index],),
            background=(),
            camera=self.camera,
            rng_seed=self.rng_seed,
        )

    def without_foreground(self) -> "SceneState":
        return SceneState(
            foreground=(),
            background=self.background,
            camera=self.camera,
            rng_seed=self.rng_seed,
        )
