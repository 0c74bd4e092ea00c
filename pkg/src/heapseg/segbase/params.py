"""Parameter sets for the non-learning segmentation baselines."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from heapseg.errors import ConfigError


def _check_keys(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")


@dataclass(frozen=True)
class EuclideanParams:
    """Distance clustering: points within ``radius`` meters connect."""

    radius: float = 0.005
    min_cluster: int = 500
    max_cluster: int = 1_000_000

    def __post_init__(self):
        if self.radius <= 0:
            raise ConfigError(f"radius must be positive, got {self.radius}")
        if not (0 < self.min_cluster <= self.max_cluster):
            raise ConfigError(
                f"need 0 < min_cluster <= max_cluster, got "
                f"{self.min_cluster}..{self.max_cluster}"
            )

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "min_cluster": self.min_cluster,
            "max_cluster": self.max_cluster,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EuclideanParams":
        _check_keys(obj, {"radius", "min_cluster", "max_cluster"}, "euclidean")
        base = cls()
        return cls(
            radius=float(obj.get("radius", base.radius)),
            min_cluster=int(obj.get("min_cluster", base.min_cluster)),
            max_cluster=int(obj.get("max_cluster", base.max_cluster)),
        )


@dataclass(frozen=True)
class RegionGrowingParams:
    """Normal-angle region growing over a k-NN graph."""

    k_neighbors: int = 30
    angle_threshold: float = math.pi / 12
    curvature_threshold: float = 0.05
    min_cluster: int = 500

    def __post_init__(self):
        if self.k_neighbors < 3:
            raise ConfigError(f"k_neighbors must be >= 3, got {self.k_neighbors}")
        if not (0.0 < self.angle_threshold < math.pi):
            raise ConfigError(
                f"angle_threshold must be in (0, pi), got {self.angle_threshold}"
            )
        if self.curvature_threshold < 0:
            raise ConfigError(
                f"curvature_threshold must be >= 0, got {self.curvature_threshold}"
            )
        if self.min_cluster < 1:
            raise ConfigError(f"min_cluster must be >= 1, got {self.min_cluster}")

    def to_json(self) -> dict:
        return {
            "k_neighbors": self.k_neighbors,
            "angle_threshold": self.angle_threshold,
            "curvature_threshold": self.curvature_threshold,
            "min_cluster": self.min_cluster,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RegionGrowingParams":
        _check_keys(
            obj,
            {"k_neighbors", "angle_threshold", "curvature_threshold", "min_cluster"},
            "region_growing",
        )
        base = cls()
        return cls(
            k_neighbors=int(obj.get("k_neighbors", base.k_neighbors)),
            angle_threshold=float(obj.get("angle_threshold", base.angle_threshold)),
            curvature_threshold=float(
                obj.get("curvature_threshold", base.curvature_threshold)
            ),
            min_cluster=int(obj.get("min_cluster", base.min_cluster)),
        )


@dataclass(frozen=True)
class SegParams:
    """Everything the baseline segmenters need, JSON round-trippable."""

    euclidean: EuclideanParams = field(default_factory=EuclideanParams)
    region_growing: RegionGrowingParams = field(default_factory=RegionGrowingParams)
    background_delta: float = 0.005

    def __post_init__(self):
        if self.background_delta < 0:
            raise ConfigError(
                f"background_delta must be >= 0, got {self.background_delta}"
            )

    def to_json(self) -> dict:
        return {
            "euclidean": self.euclidean.to_json(),
            "region_growing": self.region_growing.to_json(),
            "background_delta": self.background_delta,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SegParams":
        _check_keys(obj, {"euclidean", "region_growing", "background_delta"}, "params")
        base = cls()
        return cls(
            euclidean=EuclideanParams.from_json(obj.get("euclidean", {})),
            region_growing=RegionGrowingParams.from_json(obj.get("region_growing", {})),
            background_delta=float(obj.get("background_delta", base.background_delta)),
        )
