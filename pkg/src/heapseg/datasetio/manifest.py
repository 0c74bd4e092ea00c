"""Dataset manifest: the commit record written after all other files."""

from __future__ import annotations

import string
from dataclasses import dataclass

from heapseg.datasetio.coco_json import canonical_json
from heapseg.errors import ConfigError

import json

MAX_LEVEL = 65535

_FIELDS = {
    "name",
    "depth_scale",
    "far",
    "width",
    "height",
    "split",
    "master_seed",
    "config_sha256",
    "num_images",
    "num_instances",
    "object_ids",
}


@dataclass(frozen=True)
class DatasetManifest:
    """Identity and integrity data for one generated dataset."""

    name: str
    depth_scale: float
    far: float
    width: int
    height: int
    split: str
    master_seed: int
    config_sha256: str
    num_images: int
    num_instances: int
    object_ids: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "object_ids", tuple(self.object_ids))
        if self.depth_scale <= 0 or self.far <= 0:
            raise ConfigError("depth_scale and far must be positive")
        if self.depth_scale * self.far > MAX_LEVEL:
            raise ConfigError(
                f"depth_scale {self.depth_scale} x far {self.far} exceeds "
                f"the 16-bit level range {MAX_LEVEL}"
            )
        if self.width < 1 or self.height < 1:
            raise ConfigError(f"bad image size {self.width}x{self.height}")
        if self.num_images < 0 or self.num_instances < 0:
            raise ConfigError("counts must be non-negative")
        if len(self.config_sha256) != 64 or any(
            c not in string.hexdigits for c in self.config_sha256
        ):
            raise ConfigError(f"config_sha256 is not a sha256 hex digest: {self.config_sha256!r}")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "depth_scale": self.depth_scale,
            "far": self.far,
            "width": self.width,
            "height": self.height,
            "split": self.split,
            "master_seed": self.master_seed,
            "config_sha256": self.config_sha256,
            "num_images": self.num_images,
            "num_instances": self.num_instances,
            "object_ids": list(self.object_ids),
        }


def write_manifest(manifest: DatasetManifest) -> bytes:
    return canonical_json(manifest.to_json())


def read_manifest(data: bytes) -> DatasetManifest:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"manifest is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("manifest must be a JSON object")
    missing = _FIELDS - set(doc)
    if missing:
        raise ConfigError(f"manifest is missing keys {sorted(missing)}")
    unknown = set(doc) - _FIELDS
    if unknown:
        raise ConfigError(f"manifest has unknown keys {sorted(unknown)}")
    return DatasetManifest(
        name=str(doc["name"]),
        depth_scale=float(doc["depth_scale"]),
        far=float(doc["far"]),
        width=int(doc["width"]),
        height=int(doc["height"]),
        split=str(doc["split"]),
        master_seed=int(doc["master_seed"]),
        config_sha256=str(doc["config_sha256"]),
        num_images=int(doc["num_images"]),
        num_instances=int(doc["num_instances"]),
        object_ids=tuple(str(x) for x in doc["object_ids"]),
    )
