"""Benchmark the numba kernels against the pure-numpy fallback.

Runs each hot kernel through both backends on identical inputs, checks the
outputs are bit-identical, and reports wall-clock speedups. Run from the
repository root:

    python3 benchmarks/bench_kernels.py
"""

from __future__ import annotations

import time

import numpy as np

from heapseg._kernels import numba_backend, numpy_backend
from heapseg.core.camera import CameraIntrinsics, CameraModel
from heapseg.core.geometry import RigidTransform
from heapseg.heapgen import GenConfig, sample_heap_state, scene_rng
from heapseg.meshio import ModelDatabase
from heapseg.render import RenderSettings, render_depth

REPEATS = 5


def timeit(fn, *args):
    best = np.inf
    out = None
    for _ in range(REPEATS):
        start = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - start)
    return out, best


def scene_inputs():
    """One representative heap scene at 512x384, projected and ready."""
    config = GenConfig()
    db = ModelDatabase.load("models")
    rng = scene_rng(7, 0)
    scene = sample_heap_state(rng, config, db)
    meshes = {e.model_id: e.mesh for e in db.entries}
    meshes.update(config.background_meshes())
    return scene, meshes, config


def bench_raster(scene, meshes, config):
    from heapseg.render.raster import _scene_triangles, clip_triangles_near

    settings = RenderSettings(far=6.5)
    camera = scene.camera
    corners = clip_triangles_near(
        _scene_triangles(
            tuple(scene.foreground) + tuple(scene.background), camera, meshes
        ),
        settings.near,
    )
    intr = camera.intrinsics
    uv = np.empty(corners.shape, dtype=np.float64)
    z = corners[:, :, 2]
    uv[:, :, 0] = intr.fx * corners[:, :, 0] / z + intr.cx
    uv[:, :, 1] = intr.fy * corners[:, :, 1] / z + intr.cy
    uv[:, :, 2] = z
    w = 1.0 / z

    def run(impl):
        depth = np.full((intr.height, intr.width), np.inf, dtype=np.float64)
        impl.raster_triangles(depth, uv, w, settings.near, settings.far)
        return depth

    return run, corners.shape[0]


def bench_inpaint(scene, meshes, config):
    settings = RenderSettings(far=6.5)
    img = render_depth(scene, scene.camera, settings, meshes)
    src = img.data.astype(np.float64)
    src[~img.valid] = 0.0

    def run(impl):
        a = src.copy()
        b = np.empty_like(a)
        for _ in range(50):
            remaining = impl.inpaint_pass(a, b)
            a, b = b, a
            if remaining == 0:
                break
        return a

    return run, int((~img.valid).sum())


def bench_footprint(scene, meshes, config):
    rng = np.random.default_rng(5)
    n = 5000
    centers = rng.uniform(-0.18, 0.18, size=(n, 1, 3))
    corners = centers + rng.uniform(-0.03, 0.03, size=(n, 3, 3))
    nx = ny = 200

    def run(impl):
        lower = np.full((ny, nx), np.inf)
        upper = np.full((ny, nx), -np.inf)
        impl.footprint_accumulate(lower, upper, corners, -0.2, -0.2, 1.0 / 0.002)
        return np.stack([lower, upper])

    return run, n


def bench_region_grow(scene, meshes, config):
    rng = np.random.default_rng(3)
    n = 20000
    pts = rng.uniform(-0.2, 0.2, size=(n, 3))
    from scipy.spatial import cKDTree

    tree = cKDTree(pts)
    _, nbr = tree.query(pts, k=30)
    normals = rng.normal(size=(n, 3))
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    curv = rng.uniform(0, 0.1, size=n)
    valid = np.ones(n, dtype=bool)
    order = np.lexsort((np.arange(n), curv))

    def run(impl):
        return impl.region_grow_labels(
            nbr.astype(np.int64), normals, curv, valid, order,
            np.cos(np.pi / 4), 0.05,
        )

    return run, n


def main() -> None:
    scene, meshes, config = scene_inputs()
    benches = [
        ("raster_triangles (512x384 heap)", bench_raster),
        ("footprint_accumulate (5k tris)", bench_footprint),
        ("inpaint_pass x50 (512x384)", bench_inpaint),
        ("region_grow_labels (20k pts, k=30)", bench_region_grow),
    ]
    print(f"{'kernel':<38} {'numpy':>10} {'numba':>10} {'speedup':>8}  identical")
    for name, setup in benches:
        run, size = setup(scene, meshes, config)
        run(numba_backend)  # JIT warmup outside the timed region
        out_np, t_np = timeit(run, numpy_backend)
        out_nb, t_nb = timeit(run, numba_backend)
        same = np.array_equal(out_np, out_nb)
        print(
            f"{name:<38} {t_np * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms "
            f"{t_np / t_nb:>7.1f}x  {same}"
        )
        if not same:
            raise SystemExit(f"backend mismatch in {name}")


if __name__ == "__main__":
    main()
