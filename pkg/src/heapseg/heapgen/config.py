"""Generation configuration: sampling distributions and scene geometry."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

from heapseg.core.mesh import TriangleMesh
from heapseg.errors import ConfigError
from heapseg.meshio.primitives import make_bin, make_table

BIN_MESH_ID = "__bin__"
TABLE_MESH_ID = "__table__"


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] sampled uniformly."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (self.lo <= self.hi):
            raise ConfigError(f"empty interval [{self.lo}, {self.hi}]")

    def sample(self, rng) -> float:
        return float(rng.uniform(self.lo, self.hi))

    def to_json(self) -> list[float]:
        return [self.lo, self.hi]

    @classmethod
    def from_json(cls, obj) -> "Interval":
        if not (isinstance(obj, (list, tuple)) and len(obj) == 2):
            raise ConfigError(f"interval must be [lo, hi], got {obj!r}")
        return cls(float(obj[0]), float(obj[1]))


@dataclass(frozen=True)
class BinSpec:
    """Interior dimensions of the bin; walls are built around them."""

    width: float = 0.4
    depth: float = 0.4
    height: float = 0.15
    wall: float = 0.01

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ConfigError(f"bin {f.name} must be positive")


@dataclass(frozen=True)
class CameraRanges:
    """Domain-randomization intervals for pose and intrinsics.

    Angles in radians, lengths in meters, intrinsics in pixels. Elevation is
    measured up from the horizontal plane; the pose defaults keep the camera
    on a shell above the bin, and the intrinsics defaults are +/-5% bands
    around fx=fy=550, cx=256, cy=192 at a 512x384 image.
    """

    radius: Interval = field(default_factory=lambda: Interval(0.55, 0.8))
    elevation: Interval = field(default_factory=lambda: Interval(math.pi / 3, math.pi / 2))
    azimuth: Interval = field(default_factory=lambda: Interval(0.0, 2.0 * math.pi))
    roll: Interval = field(
        default_factory=lambda: Interval(-math.pi / 18.0, math.pi / 18.0)
    )
    fx: Interval = field(default_factory=lambda: Interval(522.5, 577.5))
    fy: Interval = field(default_factory=lambda: Interval(522.5, 577.5))
    cx: Interval = field(default_factory=lambda: Interval(243.2, 268.8))
    cy: Interval = field(default_factory=lambda: Interval(182.4, 201.6))

    def __post_init__(self):
        if self.radius.lo <= 0:
            raise ConfigError("camera radius must be positive")
        if not (0.0 < self.elevation.lo and self.elevation.hi <= math.pi / 2 + 1e-12):
            raise ConfigError("elevation interval must lie within (0, pi/2]")

    def to_json(self) -> dict:
        return {f.name: getattr(self, f.name).to_json() for f in fields(self)}

    @classmethod
    def from_json(cls, obj: dict) -> "CameraRanges":
        kwargs = {k: Interval.from_json(v) for k, v in obj.items()}
        return cls(**kwargs)


@dataclass(frozen=True)
class GenConfig:
    """Everything needed to sample a scene, minus the model files."""

    lambda_fg: float = 7.5
    max_fg: int = 10
    min_fg: int = 1
    bin: BinSpec = field(default_factory=BinSpec)
    table_size: float = 4.0
    table_thickness: float = 0.02
    camera: CameraRanges = field(default_factory=CameraRanges)
    render_width: int = 512
    render_height: int = 384
    mask_eps: float = 1e-4
    master_seed: int = 0
    models_dir: str = "models"
    cell_size: float = 0.002

    def __post_init__(self):
        if self.lambda_fg <= 0:
            raise ConfigError("lambda_fg must be positive")
        if not (0 < self.min_fg <= self.max_fg):
            raise ConfigError("need 0 < min_fg <= max_fg")
        if self.render_width <= 0 or self.render_height <= 0:
            raise ConfigError("render size must be positive")
        if self.mask_eps <= 0:
            raise ConfigError("mask_eps must be positive")
        if self.cell_size <= 0:
            raise ConfigError("cell_size must be positive")
        if self.table_size <= 0 or self.table_thickness <= 0:
            raise ConfigError("table dimensions must be positive")

    def bin_mesh(self) -> TriangleMesh:
        b = self.bin
        return make_bin(b.width, b.depth, b.height, b.wall, name=BIN_MESH_ID)

    def table_mesh(self) -> TriangleMesh:
        # table top flush with the bin's outer bottom
        return make_table(
            self.table_size, self.table_thickness, -self.bin.wall, name=TABLE_MESH_ID
        )

    def background_meshes(self) -> dict[str, TriangleMesh]:
        return {BIN_MESH_ID: self.bin_mesh(), TABLE_MESH_ID: self.table_mesh()}

    def to_json(self) -> dict:
        return {
            "lambda_fg": self.lambda_fg,
            "max_fg": self.max_fg,
            "min_fg": self.min_fg,
            "bin": {
                "width": self.bin.width,
                "depth": self.bin.depth,
                "height": self.bin.height,
                "wall": self.bin.wall,
            },
            "table_size": self.table_size,
            "table_thickness": self.table_thickness,
            "camera": self.camera.to_json(),
            "render_width": self.render_width,
            "render_height": self.render_height,
            "mask_eps": self.mask_eps,
            "master_seed": self.master_seed,
            "models_dir": self.models_dir,
            "cell_size": self.cell_size,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GenConfig":
        if not isinstance(obj, dict):
            raise ConfigError("generation config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(obj) - known)
        if unknown:
            raise ConfigError(f"unknown generation config keys: {unknown}")
        kwargs = dict(obj)
        if "bin" in kwargs:
            kwargs["bin"] = BinSpec(**kwargs["bin"])
        if "camera" in kwargs:
            kwargs["camera"] = CameraRanges.from_json(kwargs["camera"])
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None
