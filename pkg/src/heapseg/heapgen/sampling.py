"""State sampling: object counts, settling, cameras, whole scenes."""

from __future__ import annotations

import logging
import math

import numpy as np

from heapseg.core.camera import CameraIntrinsics, CameraModel
from heapseg.core.geometry import RigidTransform, rotation_about_z
from heapseg.core.mesh import TriangleMesh
from heapseg.core.scene import ObjectInstance, SceneState
from heapseg.errors import PlacementError
from heapseg.heapgen.config import BIN_MESH_ID, TABLE_MESH_ID, GenConfig
from heapseg.heapgen.heightfield import HeightField
from heapseg.meshio.database import ModelDatabase

logger = logging.getLogger(__name__)

# give up on an object after this many (pose, yaw, xy) attempts
PLACEMENT_ATTEMPTS = 100
# extra draws allowed when skipped placements leave the scene under min_fg
TOPUP_ATTEMPTS = 100


def scene_rng(master_seed: int, scene_index: int) -> np.random.Generator:
    """Independent per-scene stream: any scene is reproducible in isolation."""
    seq = np.random.SeedSequence([int(master_seed), int(scene_index)])
    return np.random.Generator(np.random.PCG64(seq))


def sample_object_count(rng, lam: float, max_count: int, min_count: int) -> int:
    """Poisson draw, rejection-resampled into [min_count, max_count]."""
    if min_count < 1 or max_count < min_count or lam <= 0:
        raise ValueError("need min_count >= 1, max_count >= min_count, lam > 0")
    while True:
        k = int(rng.poisson(lam))
        if min_count <= k <= max_count:
            return k


def sample_camera(rng, config: GenConfig) -> CameraModel:
    """Uniform spherical pose aimed at the bin center, uniform intrinsics.

    Draw order is fixed (radius, elevation, azimuth, roll, fx, fy, cx, cy)
    so streams are reproducible.
    """
    cam = config.camera
    radius = cam.radius.sample(rng)
    elevation = cam.elevation.sample(rng)
    azimuth = cam.azimuth.sample(rng)
    roll = cam.roll.sample(rng)
    fx = cam.fx.sample(rng)
    fy = cam.fy.sample(rng)
    cx = cam.cx.sample(rng)
    cy = cam.cy.sample(rng)

    ce = math.cos(elevation)
    eye = radius * np.array([ce * math.cos(azimuth), ce * math.sin(azimuth), math.sin(elevation)])
    z_axis = -eye / np.linalg.norm(eye)  # optical axis: eye toward bin center
    t1 = np.cross(z_axis, np.array([0.0, 0.0, 1.0]))
    if np.dot(t1, t1) < 1e-18:
        # straight-down view: any horizontal reference works; tie it to azimuth
        t1 = np.cross(z_axis, np.array([math.cos(azimuth), math.sin(azimuth), 0.0]))
    x_axis = t1 / np.linalg.norm(t1)
    y_axis = np.cross(z_axis, x_axis)
    rotation = np.column_stack([x_axis, y_axis, z_axis]) @ rotation_about_z(roll)

    intrinsics = CameraIntrinsics(
        fx=fx, fy=fy, cx=cx, cy=cy,
        width=config.render_width, height=config.render_height,
    )
    return CameraModel(intrinsics=intrinsics, pose=RigidTransform(rotation, eye))


def settle_object(
    heightfield: HeightField,
    mesh: TriangleMesh,
    stable_poses,
    rng,
) -> RigidTransform:
    """Quasi-static drop: stable pose by weight, uniform yaw, uniform (x, y).

    (x, y) is drawn from the translations that keep the rotated footprint
    inside the height-field extent; a pose/yaw whose footprint cannot fit is
    redrawn, up to PLACEMENT_ATTEMPTS times.
    """
    probs = np.array([p for _, p in stable_poses])
    cumulative = np.cumsum(probs)
    for _ in range(PLACEMENT_ATTEMPTS):
        u = rng.random()
        pose_idx = min(int(np.searchsorted(cumulative, u, side="right")), len(probs) - 1)
        yaw = rng.uniform(0.0, 2.0 * math.pi)
        rotation = rotation_about_z(yaw) @ stable_poses[pose_idx][0]
        verts = mesh.vertices @ rotation.T
        lo = verts.min(axis=0)
        hi = verts.max(axis=0)
        tx_lo, tx_hi = heightfield.x0 - lo[0], heightfield.x_max - hi[0]
        ty_lo, ty_hi = heightfield.y0 - lo[1], heightfield.y_max - hi[1]
        if tx_lo > tx_hi or ty_lo > ty_hi:
            continue
        tx = rng.uniform(tx_lo, tx_hi)
        ty = rng.uniform(ty_lo, ty_hi)
        corners = verts[mesh.triangles] + np.array([tx, ty, 0.0])
        z = heightfield.drop(corners)
        return RigidTransform(rotation, np.array([tx, ty, z]))
    raise PlacementError(
        f"placement failed: no feasible (x, y) in {PLACEMENT_ATTEMPTS} attempts"
    )


def sample_heap_state(
    rng,
    config: GenConfig,
    db: ModelDatabase,
    sub_seed: int = 0,
) -> SceneState:
    """Sample one full ground-truth state.

    Draw order: object count, all model ids, then per-object settling, then
    the camera. Objects whose footprint cannot be placed are skipped with a
    warning; if that leaves fewer than min_fg, replacements are drawn.
    """
    if len(db) == 0:
        raise ValueError("model database is empty")
    count = sample_object_count(rng, config.lambda_fg, config.max_fg, config.min_fg)
    ids = [db.ids[int(rng.integers(0, len(db)))] for _ in range(count)]
    heightfield = HeightField.for_bin(config.bin, config.cell_size)

    placed: list[ObjectInstance] = []

    def try_place(model_id: str) -> bool:
        entry = db.get(model_id)
        try:
            pose = settle_object(heightfield, entry.mesh, entry.stable_poses, rng)
        except PlacementError as exc:
            logger.warning("skipping object %s: %s", model_id, exc)
            return False
        placed.append(ObjectInstance(mesh_id=model_id, pose=pose, kind="foreground"))
        return True

    for model_id in ids:
        try_place(model_id)
    topup = 0
    while len(placed) < config.min_fg and topup < TOPUP_ATTEMPTS:
        topup += 1
        try_place(db.ids[int(rng.integers(0, len(db)))])
    if len(placed) < config.min_fg:
        raise PlacementError(
            f"could not place the minimum of {config.min_fg} objects"
        )

    camera = sample_camera(rng, config)
    identity = RigidTransform.identity()
    background = (
        ObjectInstance(mesh_id=BIN_MESH_ID, pose=identity, kind="background"),
        ObjectInstance(mesh_id=TABLE_MESH_ID, pose=identity, kind="background"),
    )
    return SceneState(
        foreground=tuple(placed),
        background=background,
        camera=camera,
        rng_seed=int(sub_seed),
    )
