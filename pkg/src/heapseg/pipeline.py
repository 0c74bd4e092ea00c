"""Dataset-scale orchestration: generation, segmentation, tuning."""

from __future__ import annotations

import hashlib
import itertools
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from heapseg.cocoeval import Prediction, evaluate
from heapseg.core.annotations import AnnotationSet, ImageAnnotation, InstanceRecord
from heapseg.core.camera import CameraIntrinsics, CameraModel
from heapseg.core.geometry import RigidTransform
from heapseg.core.masks import InstanceMask
from heapseg.datasetio import (
    DatasetManifest,
    canonical_json,
    read_annotations,
    read_depth_png,
    read_manifest,
    write_annotations,
    write_depth_png,
    write_manifest,
)
from heapseg.errors import ConfigError
from heapseg.heapgen import GenConfig, sample_heap_state, scene_rng
from heapseg.meshio import ModelDatabase
from heapseg.render import (
    RenderSettings,
    extract_modal_masks,
    render_depth,
    render_empty_bin,
    render_object_isolated,
)
from heapseg.segbase import METHODS, SegParams, segment

logger = logging.getLogger(__name__)

DEPTH_DIR = "depth_ims"
ANNOTATIONS_FILE = "annotations.json"
CONFIG_FILE = "config.json"
MANIFEST_FILE = "manifest.json"
PARTIAL_MANIFEST_FILE = "manifest.partial.json"

MAX_LEVEL = 65535


@dataclass(frozen=True)
class RunConfig:
    """Everything one dataset run needs, serialized alongside the data."""

    gen: GenConfig = field(default_factory=GenConfig)
    render: RenderSettings = field(default_factory=lambda: RenderSettings(far=6.5))
    dataset_name: str = "heapseg-sim"
    depth_scale: float = 10000.0
    split: str = "train"
    object_ids: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.object_ids is not None:
            object.__setattr__(self, "object_ids", tuple(self.object_ids))
        if self.depth_scale <= 0:
            raise ConfigError(f"depth_scale must be positive, got {self.depth_scale}")
        if self.depth_scale * self.render.far > MAX_LEVEL:
            raise ConfigError(
                f"depth_scale {self.depth_scale} x far plane {self.render.far} "
                f"exceeds the 16-bit PNG level range {MAX_LEVEL}"
            )

    def to_json(self) -> dict:
        return {
            "gen": self.gen.to_json(),
            "render": {
                "near": self.render.near,
                "far": self.render.far,
                "mask_eps": self.render.mask_eps,
            },
            "dataset": {
                "name": self.dataset_name,
                "depth_scale": self.depth_scale,
                "split": self.split,
                "object_ids": list(self.object_ids) if self.object_ids is not None else None,
            },
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RunConfig":
        if not isinstance(obj, dict):
            raise ConfigError("run config must be a JSON object")
        unknown = sorted(set(obj) - {"gen", "render", "dataset"})
        if unknown:
            raise ConfigError(f"unknown run config keys: {unknown}")
        render_obj = dict(obj.get("render", {}))
        unknown = sorted(set(render_obj) - {"near", "far", "mask_eps"})
        if unknown:
            raise ConfigError(f"unknown render config keys: {unknown}")
        base_render = RenderSettings(far=6.5)
        try:
            render = RenderSettings(
                near=float(render_obj.get("near", base_render.near)),
                far=float(render_obj.get("far", base_render.far)),
                mask_eps=float(render_obj.get("mask_eps", base_render.mask_eps)),
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        dataset_obj = dict(obj.get("dataset", {}))
        unknown = sorted(set(dataset_obj) - {"name", "depth_scale", "split", "object_ids"})
        if unknown:
            raise ConfigError(f"unknown dataset config keys: {unknown}")
        roster = dataset_obj.get("object_ids")
        return cls(
            gen=GenConfig.from_json(obj.get("gen", {})),
            render=render,
            dataset_name=str(dataset_obj.get("name", "heapseg-sim")),
            depth_scale=float(dataset_obj.get("depth_scale", 10000.0)),
            split=str(dataset_obj.get("split", "train")),
            object_ids=tuple(str(x) for x in roster) if roster is not None else None,
        )


def _load_db(config: RunConfig) -> ModelDatabase:
    db = ModelDatabase.load(config.gen.models_dir)
    if config.object_ids is not None:
        db = db.subset(config.object_ids)
    return db


# per-process state for pool workers, rebuilt by the initializers below
_WORKER: dict = {}


def _init_generate_worker(config_json: str) -> None:
    config = RunConfig.from_json(json.loads(config_json))
    db = _load_db(config)
    meshes = {entry.model_id: entry.mesh for entry in db.entries}
    meshes.update(config.gen.background_meshes())
    _WORKER["generate"] = (config, db, meshes)


def _generate_scene(index: int):
    """Sample, render and encode one scene; plain tuples for pickling."""
    config, db, meshes = _WORKER["generate"]
    start = time.perf_counter()
    rng = scene_rng(config.gen.master_seed, index)
    scene = sample_heap_state(rng, config.gen, db, sub_seed=index)
    full = render_depth(scene, scene.camera, config.render, meshes)
    isolated = [
        render_object_isolated(scene, scene.camera, i, config.render, meshes)
        for i in range(scene.num_foreground)
    ]
    masks = extract_modal_masks(full, isolated, config.gen.mask_eps)
    png = write_depth_png(full, config.depth_scale)
    intr = scene.camera.intrinsics
    pose = scene.camera.pose
    return (
        index,
        png,
        (intr.fx, intr.fy, intr.cx, intr.cy),
        np.asarray(pose.rotation),
        np.asarray(pose.translation),
        [(np.asarray(m.rle), m.area) for m in masks],
        time.perf_counter() - start,
    )


def generate_dataset(
    config: RunConfig, count: int, out_dir, jobs: int = 1
) -> DatasetManifest:
    """Generate `count` scenes into `out_dir` and commit a manifest.

    Files: depth_ims/NNNNNN.png, annotations.json, config.json, and
    manifest.json written last as the commit point. A fatal error leaves a
    manifest.partial.json marker instead. Output is byte-deterministic in
    (config, count) and independent of `jobs`.
    """
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    db = _load_db(config)  # validates models_dir and roster early
    roster = config.object_ids if config.object_ids is not None else db.ids
    out = Path(out_dir)
    (out / DEPTH_DIR).mkdir(parents=True, exist_ok=True)
    config_bytes = canonical_json(config.to_json())
    width, height = config.gen.render_width, config.gen.render_height

    images: list[ImageAnnotation] = []
    next_instance = 1

    def consume(payloads) -> None:
        nonlocal next_instance
        for index, png, intr, rot, trans, mask_data, elapsed in payloads:
            file_name = f"{index:06d}.png"
            (out / DEPTH_DIR / file_name).write_bytes(png)
            records = []
            for rle, area in mask_data:
                mask = InstanceMask(height=height, width=width, rle=rle, area=area)
                records.append(InstanceRecord.from_mask(next_instance, mask))
                next_instance += 1
            fx, fy, cx, cy = intr
            images.append(
                ImageAnnotation(
                    image_id=index,
                    file_name=file_name,
                    width=width,
                    height=height,
                    camera=CameraIntrinsics(
                        fx=fx, fy=fy, cx=cx, cy=cy, width=width, height=height
                    ),
                    instances=tuple(records),
                    pose=RigidTransform(rot, trans),
                )
            )
            logger.info(
                "scene %d: %d visible instances, %.3f s", index, len(records), elapsed
            )

    try:
        if jobs == 1:
            _init_generate_worker(config_bytes.decode())
            consume(map(_generate_scene, range(count)))
        else:
            with ProcessPoolExecutor(
                max_workers=jobs,
                initializer=_init_generate_worker,
                initargs=(config_bytes.decode(),),
            ) as pool:
                consume(pool.map(_generate_scene, range(count)))
        annotations = AnnotationSet(
            images=tuple(images), depth_scale=config.depth_scale, split=config.split
        )
        (out / ANNOTATIONS_FILE).write_bytes(write_annotations(annotations))
        (out / CONFIG_FILE).write_bytes(config_bytes)
        manifest = DatasetManifest(
            name=config.dataset_name,
            depth_scale=config.depth_scale,
            far=config.render.far,
            width=width,
            height=height,
            split=config.split,
            master_seed=config.gen.master_seed,
            config_sha256=hashlib.sha256(config_bytes).hexdigest(),
            num_images=len(images),
            num_instances=annotations.num_instances,
            object_ids=roster,
        )
        (out / MANIFEST_FILE).write_bytes(write_manifest(manifest))
        (out / PARTIAL_MANIFEST_FILE).unlink(missing_ok=True)
        return manifest
    except Exception as exc:
        (out / PARTIAL_MANIFEST_FILE).write_bytes(
            canonical_json({"error": str(exc), "completed_images": len(images)})
        )
        raise


def load_dataset(dataset_dir) -> tuple[DatasetManifest, RunConfig, AnnotationSet]:
    """Read a generated dataset, verifying the config hash."""
    root = Path(dataset_dir)
    manifest = read_manifest((root / MANIFEST_FILE).read_bytes())
    config_bytes = (root / CONFIG_FILE).read_bytes()
    digest = hashlib.sha256(config_bytes).hexdigest()
    if digest != manifest.config_sha256:
        raise ConfigError(
            f"config.json hash {digest} does not match manifest "
            f"{manifest.config_sha256}"
        )
    config = RunConfig.from_json(json.loads(config_bytes))
    annotations = read_annotations((root / ANNOTATIONS_FILE).read_bytes())
    return manifest, config, annotations


def _image_task(im: ImageAnnotation):
    if im.pose is None:
        raise ConfigError(
            f"image {im.image_id} lacks a camera pose; cannot re-render background"
        )
    return (
        im.image_id,
        im.file_name,
        (im.camera.fx, im.camera.fy, im.camera.cx, im.camera.cy),
        (im.width, im.height),
        np.asarray(im.pose.rotation),
        np.asarray(im.pose.translation),
    )


def _segment_task(root: Path, config: RunConfig, params: SegParams, method: str, task):
    image_id, file_name, intr, size, rot, trans = task
    fx, fy, cx, cy = intr
    width, height = size
    img = read_depth_png(
        (root / DEPTH_DIR / file_name).read_bytes(), config.depth_scale
    )
    intrinsics = CameraIntrinsics(fx=fx, fy=fy, cx=cx, cy=cy, width=width, height=height)
    camera = CameraModel(intrinsics=intrinsics, pose=RigidTransform(rot, trans))
    background = render_empty_bin(config.gen, camera, config.render)
    results = segment(img, intrinsics, background, params, method)
    return image_id, [(np.asarray(m.rle), m.area, score) for m, score in results]


def _init_segment_worker(root: str, config_json: str, params_json: str, method: str) -> None:
    _WORKER["segment"] = (
        Path(root),
        RunConfig.from_json(json.loads(config_json)),
        SegParams.from_json(json.loads(params_json)),
        method,
    )


def _segment_payload(task):
    root, config, params, method = _WORKER["segment"]
    return _segment_task(root, config, params, method, task)


def segment_dataset(
    dataset_dir, method: str, params: SegParams, jobs: int = 1
) -> list[Prediction]:
    """Run a baseline segmenter over every image of a generated dataset."""
    if method not in METHODS:
        raise ConfigError(f"method must be one of {METHODS}, got {method!r}")
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    manifest, config, annotations = load_dataset(dataset_dir)
    root = Path(dataset_dir)
    tasks = [_image_task(im) for im in annotations.images]
    if jobs == 1:
        payloads = [_segment_task(root, config, params, method, t) for t in tasks]
    else:
        with ProcessPoolExecutor(
            max_workers=jobs,
            initializer=_init_segment_worker,
            initargs=(
                str(root),
                canonical_json(config.to_json()).decode(),
                canonical_json(params.to_json()).decode(),
                method,
            ),
        ) as pool:
            payloads = list(pool.map(_segment_payload, tasks))
    preds = []
    for image_id, items in payloads:
        for rle, area, score in items:
            mask = InstanceMask(
                height=manifest.height, width=manifest.width, rle=rle, area=area
            )
            preds.append(Prediction(image_id=image_id, mask=mask, score=score))
    logger.info(
        "segmented %d images with %s: %d predictions",
        len(tasks),
        method,
        len(preds),
    )
    return preds


def _grid_axes(section: dict, cls, where: str):
    names = [f.name for f in fields(cls)]
    unknown = sorted(set(section) - set(names))
    if unknown:
        raise ConfigError(f"{where}: unknown grid keys {unknown}")
    axes = []
    for name in names:  # dataclass field order keeps expansion deterministic
        if name in section:
            values = section[name]
            if not isinstance(values, list) or not values:
                raise ConfigError(f"{where}.{name}: expected a non-empty list")
            axes.append((name, values))
    return axes


def expand_grid(grid: dict, method: str) -> list[SegParams]:
    """Cartesian product of a grid file over the chosen method's params."""
    if method not in METHODS:
        raise ConfigError(f"method must be one of {METHODS}, got {method!r}")
    unknown = sorted(set(grid) - {"euclidean", "region_growing", "background_delta"})
    if unknown:
        raise ConfigError(f"unknown grid keys: {unknown}")
    base = SegParams()
    section = grid.get(method, {})
    sub_cls = type(getattr(base, method))
    axes = _grid_axes(section, sub_cls, method)
    delta_values = grid.get("background_delta", [base.background_delta])
    if not isinstance(delta_values, list) or not delta_values:
        raise ConfigError("background_delta: expected a non-empty list")
    candidates = []
    for delta in delta_values:
        for combo in itertools.product(*(values for _, values in axes)):
            overrides = dict(zip((name for name, _ in axes), combo))
            sub = replace(getattr(base, method), **overrides)
            candidates.append(
                replace(base, **{method: sub, "background_delta": float(delta)})
            )
    return candidates


def tune_params(
    dataset_dir, method: str, grid: dict, images: int = 10
) -> tuple[SegParams, float]:
    """Grid-search params on the first `images` images, maximizing AP@0.50."""
    if images < 1:
        raise ValueError(f"images must be >= 1, got {images}")
    manifest, config, annotations = load_dataset(dataset_dir)
    root = Path(dataset_dir)
    subset = sorted(annotations.images, key=lambda im: im.image_id)[:images]
    gts = {im.image_id: [rec.mask for rec in im.instances] for im in subset}
    tasks = [_image_task(im) for im in subset]
    candidates = expand_grid(grid, method)
    best_params = None
    best_ap = -1.0
    for params in candidates:
        preds = []
        for task in tasks:
            image_id, items = _segment_task(root, config, params, method, task)
            for rle, area, score in items:
                mask = InstanceMask(
                    height=manifest.height, width=manifest.width, rle=rle, area=area
                )
                preds.append(Prediction(image_id=image_id, mask=mask, score=score))
        report = evaluate(preds, gts, thresholds=[0.50])
        ap = report.per_threshold_ap[0]
        logger.info("grid point %s: AP@0.50 %.4f", params.to_json(), ap)
        if ap > best_ap:
            best_ap = ap
            best_params = params
    assert best_params is not None  # expand_grid always yields >= 1 candidate
    return best_params, best_ap
