"""COCO-format annotation and prediction files."""

from __future__ import annotations

import json

import jsonschema
import numpy as np

from heapseg.core.annotations import AnnotationSet, ImageAnnotation, InstanceRecord
from heapseg.core.camera import CameraIntrinsics
from heapseg.core.geometry import RigidTransform
from heapseg.core.masks import InstanceMask
from heapseg.cocoeval.matching import Prediction
from heapseg.errors import AnnotationFormatError

CATEGORY = {"id": 1, "name": "object"}

_NUMBER = {"type": "number"}
_CAMERA_SCHEMA = {
    "type": "object",
    "required": ["fx", "fy", "cx", "cy"],
    "properties": {"fx": _NUMBER, "fy": _NUMBER, "cx": _NUMBER, "cy": _NUMBER},
}
_POSE_SCHEMA = {
    "type": ["object", "null"],
    "required": ["rotation", "translation"],
    "properties": {
        "rotation": {
            "type": "array",
            "minItems": 3,
            "maxItems": 3,
            "items": {
                "type": "array",
                "minItems": 3,
                "maxItems": 3,
                "items": _NUMBER,
            },
        },
        "translation": {"type": "array", "minItems": 3, "maxItems": 3, "items": _NUMBER},
    },
}
_RLE_SCHEMA = {
    "type": "object",
    "required": ["size", "counts"],
    "properties": {
        "size": {
            "type": "array",
            "minItems": 2,
            "maxItems": 2,
            "items": {"type": "integer", "minimum": 1},
        },
        "counts": {"type": "array", "items": {"type": "integer", "minimum": 0}},
    },
}
ANNOTATIONS_SCHEMA = {
    "type": "object",
    "required": ["info", "images", "annotations", "categories"],
    "properties": {
        "info": {
            "type": "object",
            "required": ["depth_scale", "split"],
            "properties": {
                "depth_scale": {"type": "number", "exclusiveMinimum": 0},
                "split": {"type": "string"},
            },
        },
        "images": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "file_name", "width", "height", "camera", "pose"],
                "properties": {
                    "id": {"type": "integer", "minimum": 0},
                    "file_name": {"type": "string"},
                    "width": {"type": "integer", "minimum": 1},
                    "height": {"type": "integer", "minimum": 1},
                    "camera": _CAMERA_SCHEMA,
                    "pose": _POSE_SCHEMA,
                },
            },
        },
        "annotations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": [
                    "id",
                    "image_id",
                    "category_id",
                    "segmentation",
                    "area",
                    "bbox",
                    "iscrowd",
                ],
                "properties": {
                    "id": {"type": "integer", "minimum": 1},
                    "image_id": {"type": "integer", "minimum": 0},
                    "category_id": {"const": 1},
                    "segmentation": _RLE_SCHEMA,
                    "area": {"type": "integer", "minimum": 1},
                    "bbox": {
                        "type": "array",
                        "minItems": 4,
                        "maxItems": 4,
                        "items": {"type": "integer", "minimum": 0},
                    },
                    "iscrowd": {"const": 0},
                },
            },
        },
        "categories": {"const": [CATEGORY]},
    },
}
PREDICTIONS_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["image_id", "category_id", "segmentation", "score"],
        "properties": {
            "image_id": {"type": "integer", "minimum": 0},
            "category_id": {"const": 1},
            "segmentation": _RLE_SCHEMA,
            "score": {"type": "number"},
        },
    },
}


def canonical_json(doc) -> bytes:
    """Stable serialization: sorted keys, no whitespace."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()


def _parse(data: bytes, schema: dict):
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise AnnotationFormatError(f"invalid JSON: {exc}") from None
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        raise AnnotationFormatError(exc.message, path=exc.json_path) from None
    return doc


def _mask_to_rle_json(mask: InstanceMask) -> dict:
    return {"size": [mask.height, mask.width], "counts": [int(c) for c in mask.rle]}


def _mask_from_rle_json(obj: dict, path: str) -> InstanceMask:
    height, width = obj["size"]
    counts = np.asarray(obj["counts"], dtype=np.int64)
    try:
        return InstanceMask(
            height=height, width=width, rle=counts, area=int(counts[1::2].sum())
        )
    except ValueError as exc:
        raise AnnotationFormatError(str(exc), path=path) from None


def write_annotations(aset: AnnotationSet) -> bytes:
    """Serialize to COCO instance-annotation JSON (uncompressed RLE)."""
    images = []
    annotations = []
    for im in aset.images:
        pose = None
        if im.pose is not None:
            pose = {
                "rotation": [[float(v) for v in row] for row in im.pose.rotation],
                "translation": [float(v) for v in im.pose.translation],
            }
        images.append(
            {
                "id": im.image_id,
                "file_name": im.file_name,
                "width": im.width,
                "height": im.height,
                "camera": {
                    "fx": im.camera.fx,
                    "fy": im.camera.fy,
                    "cx": im.camera.cx,
                    "cy": im.camera.cy,
                },
                "pose": pose,
            }
        )
        for rec in im.instances:
            annotations.append(
                {
                    "id": rec.instance_id,
                    "image_id": im.image_id,
                    "category_id": 1,
                    "segmentation": _mask_to_rle_json(rec.mask),
                    "area": rec.area,
                    "bbox": [int(v) for v in rec.bbox],
                    "iscrowd": 0,
                }
            )
    doc = {
        "info": {"depth_scale": aset.depth_scale, "split": aset.split},
        "images": images,
        "annotations": annotations,
        "categories": [CATEGORY],
    }
    return canonical_json(doc)


def read_annotations(data: bytes) -> AnnotationSet:
    """Parse :func:`write_annotations` output; full schema validation."""
    doc = _parse(data, ANNOTATIONS_SCHEMA)
    by_image: dict[int, list[InstanceRecord]] = {}
    for i, ann in enumerate(doc["annotations"]):
        path = f"$.annotations[{i}]"
        mask = _mask_from_rle_json(ann["segmentation"], path + ".segmentation")
        try:
            rec = InstanceRecord(
                instance_id=ann["id"],
                mask=mask,
                bbox=tuple(ann["bbox"]),
                area=ann["area"],
            )
        except ValueError as exc:
            raise AnnotationFormatError(str(exc), path=path) from None
        by_image.setdefault(ann["image_id"], []).append(rec)
    images = []
    for i, im in enumerate(doc["images"]):
        path = f"$.images[{i}]"
        cam = im["camera"]
        pose = None
        if im["pose"] is not None:
            pose = RigidTransform(
                rotation=np.array(im["pose"]["rotation"], dtype=np.float64),
                translation=np.array(im["pose"]["translation"], dtype=np.float64),
            )
        try:
            intr = CameraIntrinsics(
                fx=cam["fx"],
                fy=cam["fy"],
                cx=cam["cx"],
                cy=cam["cy"],
                width=im["width"],
                height=im["height"],
            )
            images.append(
                ImageAnnotation(
                    image_id=im["id"],
                    file_name=im["file_name"],
                    width=im["width"],
                    height=im["height"],
                    camera=intr,
                    instances=tuple(by_image.pop(im["id"], [])),
                    pose=pose,
                )
            )
        except ValueError as exc:
            raise AnnotationFormatError(str(exc), path=path) from None
    if by_image:
        missing = sorted(by_image)[0]
        raise AnnotationFormatError(
            f"annotations reference unknown image id {missing}", path="$.annotations"
        )
    try:
        return AnnotationSet(
            images=tuple(images),
            depth_scale=doc["info"]["depth_scale"],
            split=doc["info"]["split"],
        )
    except ValueError as exc:
        raise AnnotationFormatError(str(exc)) from None


def write_predictions(preds: list[Prediction]) -> bytes:
    """Serialize predictions in COCO results format."""
    records = []
    for p in preds:
        records.append(
            {
                "image_id": p.image_id,
                "category_id": 1,
                "segmentation": _mask_to_rle_json(p.mask),
                "score": p.score,
            }
        )
    return canonical_json(records)


def read_predictions(data: bytes) -> list[Prediction]:
    """Parse :func:`write_predictions` output (or any COCO results RLE file)."""
    doc = _parse(data, PREDICTIONS_SCHEMA)
    preds = []
    for i, rec in enumerate(doc):
        path = f"$[{i}]"
        mask = _mask_from_rle_json(rec["segmentation"], path + ".segmentation")
        try:
            preds.append(
                Prediction(image_id=rec["image_id"], mask=mask, score=rec["score"])
            )
        except ValueError as exc:
            raise AnnotationFormatError(str(exc), path=path) from None
    return preds
