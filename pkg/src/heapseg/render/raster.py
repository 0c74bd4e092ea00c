"""Software z-buffer depth rendering of triangle-mesh scenes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from heapseg._kernels import raster_triangles
from heapseg.core.camera import CameraModel
from heapseg.core.geometry import RigidTransform
from heapseg.core.image import DepthImage
from heapseg.core.mesh import TriangleMesh
from heapseg.core.scene import ObjectInstance, SceneState
from heapseg.heapgen.config import GenConfig

# guards against absurd allocations from a corrupt config
MAX_RENDER_DIM = 4096

NoiseHook = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class RenderSettings:
    """Clip planes and the mask-extraction depth threshold, in meters."""

    near: float = 0.01
    far: float = 10.0
    mask_eps: float = 1e-4

    def __post_init__(self):
        if not (0.0 < self.near < self.far):
            raise ValueError(f"need 0 < near < far, got near={self.near} far={self.far}")
        if self.mask_eps <= 0.0:
            raise ValueError(f"mask_eps must be positive, got {self.mask_eps}")


def _near_intersect(p: np.ndarray, q: np.ndarray, near: float) -> np.ndarray:
    t = (near - p[2]) / (q[2] - p[2])
    point = p + t * (q - p)
    point[2] = near  # exact, not near +/- rounding
    return point


def clip_triangles_near(corners: np.ndarray, near: float) -> np.ndarray:
    """Clip camera-frame triangles against the z >= near half-space.

    Returns a (T', 3, 3) array; triangles fully behind the plane are dropped
    and crossing triangles are re-triangulated (one or two outputs).
    """
    corners = np.asarray(corners, dtype=np.float64)
    if corners.shape[0] == 0:
        return corners.reshape(0, 3, 3)
    n_in = (corners[:, :, 2] >= near).sum(axis=1)
    pieces = [corners[n_in == 3]]
    crossers = corners[(n_in == 1) | (n_in == 2)]
    extra = []
    for tri in crossers:
        inside = tri[:, 2] >= near
        if inside.sum() == 1:
            i = int(np.flatnonzero(inside)[0])
            a, b, c = tri[i], tri[(i + 1) % 3], tri[(i + 2) % 3]
            extra.append([a, _near_intersect(a, b, near), _near_intersect(a, c, near)])
        else:
            i = int(np.flatnonzero(~inside)[0])
            c, a, b = tri[i], tri[(i + 1) % 3], tri[(i + 2) % 3]
            bc = _near_intersect(b, c, near)
            ca = _near_intersect(c, a, near)
            extra.append([a, b, bc])
            extra.append([a, bc, ca])
    if extra:
        pieces.append(np.array(extra))
    return np.concatenate(pieces, axis=0)


def _scene_triangles(
    instances: tuple[ObjectInstance, ...],
    camera: CameraModel,
    meshes: Mapping[str, TriangleMesh],
) -> np.ndarray:
    """Camera-frame triangle corners, (T, 3, 3), for all listed instances."""
    world_to_cam = camera.pose.inverse()
    chunks = []
    for inst in instances:
        mesh = meshes[inst.mesh_id]
        if mesh.triangles.shape[0] == 0:
            continue
        cam_pts = world_to_cam.apply(inst.pose.apply(mesh.vertices))
        chunks.append(cam_pts[mesh.triangles])
    if not chunks:
        return np.zeros((0, 3, 3))
    return np.concatenate(chunks, axis=0)


def render_depth(
    scene: SceneState,
    camera: CameraModel,
    settings: RenderSettings,
    meshes: Mapping[str, TriangleMesh],
    noise: NoiseHook | None = None,
) -> DepthImage:
    """Perspective z-buffer render of every object in the scene.

    Each pixel stores the smallest camera-frame z among triangle hits of its
    center ray within [near, far], or 0.0 when nothing is hit. ``meshes``
    maps every instance's mesh_id to its geometry. ``noise`` is an optional
    post-hook applied to the raw depth array (identity when omitted).
    """
    intr = camera.intrinsics
    if intr.width > MAX_RENDER_DIM or intr.height > MAX_RENDER_DIM:
        raise ValueError(
            f"image size {intr.width}x{intr.height} exceeds {MAX_RENDER_DIM}"
        )
    corners = _scene_triangles(scene.foreground + scene.background, camera, meshes)
    buf = np.full((intr.height, intr.width), np.inf, dtype=np.float64)
    corners = clip_triangles_near(corners, settings.near)
    if corners.shape[0]:
        z = corners[:, :, 2]
        uv = np.empty(corners.shape[:2] + (2,), dtype=np.float64)
        uv[:, :, 0] = intr.fx * corners[:, :, 0] / z + intr.cx
        uv[:, :, 1] = intr.fy * corners[:, :, 1] / z + intr.cy
        w = 1.0 / z
        raster_triangles(buf, uv, w, settings.near, settings.far)
    out = np.where(np.isfinite(buf), buf, 0.0).astype(np.float32)
    if noise is not None:
        out = np.asarray(noise(out), dtype=np.float32)
    return DepthImage(out)


def render_object_isolated(
    scene: SceneState,
    camera: CameraModel,
    index: int,
    settings: RenderSettings,
    meshes: Mapping[str, TriangleMesh],
) -> DepthImage:
    """Render one foreground object alone (no background, no other objects)."""
    return render_depth(scene.with_only(index), camera, settings, meshes)


def render_empty_bin(
    config: GenConfig,
    camera: CameraModel,
    settings: RenderSettings,
) -> DepthImage:
    """Render only the background geometry the generator places under heaps."""
    meshes = config.background_meshes()
    identity = RigidTransform.identity()
    scene = SceneState(
        foreground=(),
        background=tuple(
            ObjectInstance(mesh_id=mesh_id, pose=identity, kind="background")
            for mesh_id in meshes
        ),
        camera=camera,
        rng_seed=0,
    )
    return render_depth(scene, camera, settings, meshes)
