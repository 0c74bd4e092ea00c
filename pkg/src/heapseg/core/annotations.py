"""Per-image instance annotations and the dataset-level container."""

from __future__ import annotations

from dataclasses import dataclass, field

from heapseg.core.camera import CameraIntrinsics
from heapseg.core.geometry import RigidTransform
from heapseg.core.masks import InstanceMask


@dataclass(frozen=True)
class InstanceRecord:
    """One annotated instance: a mask plus values derived from it."""

    instance_id: int
    mask: InstanceMask
    bbox: tuple[int, int, int, int]
    area: int

    def __post_init__(self):
        if self.instance_id < 1:
            raise ValueError("instance ids start at 1")
        if self.area != self.mask.area:
            raise ValueError(f"area {self.area} != mask area {self.mask.area}")
        if tuple(self.bbox) != self.mask.bbox():
            raise ValueError(f"bbox {self.bbox} != mask bbox {self.mask.bbox()}")

    @classmethod
    def from_mask(cls, instance_id: int, mask: InstanceMask) -> "InstanceRecord":
        return cls(instance_id=instance_id, mask=mask, bbox=mask.bbox(), area=mask.area)


@dataclass(frozen=True)
class ImageAnnotation:
    """All instances visible in one image."""

    image_id: int
    file_name: str
    width: int
    height: int
    camera: CameraIntrinsics
    instances: tuple[InstanceRecord, ...] = field(default=())
    # camera-to-world pose; lets a consumer re-render the scene background
    pose: RigidTransform | None = None

    def __post_init__(self):
        object.__setattr__(self, "instances", tuple(self.instances))
        for rec in self.instances:
            if rec.mask.height != self.height or rec.mask.width != self.width:
                raise ValueError(
                    f"instance {rec.instance_id} mask is "
                    f"{rec.mask.width}x{rec.mask.height}, image is "
                    f"{self.width}x{self.height}"
                )
            if rec.area == 0:
                raise ValueError(f"instance {rec.instance_id} has an empty mask")
        ids = [rec.instance_id for rec in self.instances]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate instance ids within one image")


@dataclass(frozen=True)
class AnnotationSet:
    """Annotations for a whole split, in image-id order."""

    images: tuple[ImageAnnotation, ...]
    depth_scale: float
    split: str

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        image_ids = [im.image_id for im in self.images]
        if len(set(image_ids)) != len(image_ids):
            raise ValueError("duplicate image ids")
        all_ids: list[int] = []
        for im in self.images:
            all_ids.extend(rec.instance_id for rec in im.instances)
        if len(set(all_ids)) != len(all_ids):
            raise ValueError("instance ids must be unique across the whole set")

    @property
    def num_images(self) -> int:
        return len(self.images)

    @property
    def num_instances(self) -> int:
        return sum(len(im.instances) for im in self.images)
