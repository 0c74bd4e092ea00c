"""Pure-numpy implementations of the hot kernels.

Every arithmetic expression here matches numba_backend term for term and in
the same association order, so both backends produce bit-identical output.
min/max accumulations are order-independent, which lets this backend batch
them with vectorized updates.
"""

import math

import numpy as np


def raster_triangles(depth, uv, w, near, far):
    """Min-update ``depth`` (float64, +inf = empty) with screen triangles."""
    height, width = depth.shape
    for t in range(uv.shape[0]):
        ax = uv[t, 0, 0]
        ay = uv[t, 0, 1]
        bx = uv[t, 1, 0]
        by = uv[t, 1, 1]
        cx = uv[t, 2, 0]
        cy = uv[t, 2, 1]
        wa = w[t, 0]
        wb = w[t, 1]
        wc = w[t, 2]
        area = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        if area == 0.0:
            continue
        if area < 0.0:
            bx, cx = cx, bx
            by, cy = cy, by
            wb, wc = wc, wb
            area = -area
        abx = bx - ax
        aby = by - ay
        bcx = cx - bx
        bcy = cy - by
        cax = ax - cx
        cay = ay - cy
        ab_in = (aby == 0.0 and abx > 0.0) or aby < 0.0
        bc_in = (bcy == 0.0 and bcx > 0.0) or bcy < 0.0
        ca_in = (cay == 0.0 and cax > 0.0) or cay < 0.0
        ix0 = max(int(math.ceil(min(ax, min(bx, cx)) - 0.5)), 0)
        ix1 = min(int(math.floor(max(ax, max(bx, cx)) - 0.5)), width - 1)
        iy0 = max(int(math.ceil(min(ay, min(by, cy)) - 0.5)), 0)
        iy1 = min(int(math.floor(max(ay, max(by, cy)) - 0.5)), height - 1)
        if ix1 < ix0 or iy1 < iy0:
            continue
        py = (np.arange(iy0, iy1 + 1, dtype=np.float64) + 0.5)[:, None]
        px = (np.arange(ix0, ix1 + 1, dtype=np.float64) + 0.5)[None, :]
        e_ab = abx * (py - ay) - aby * (px - ax)
        e_bc = bcx * (py - by) - bcy * (px - bx)
        e_ca = cax * (py - cy) - cay * (px - cx)
        ok = (e_ab > 0.0) | ((e_ab == 0.0) & ab_in)
        ok &= (e_bc > 0.0) | ((e_bc == 0.0) & bc_in)
        ok &= (e_ca > 0.0) | ((e_ca == 0.0) & ca_in)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            wi = (e_bc * wa + e_ca * wb + e_ab * wc) / area
            z = 1.0 / wi
        ok &= (z >= near) & (z <= far)
        sub = depth[iy0 : iy1 + 1, ix0 : ix1 + 1]
        np.minimum(sub, np.where(ok, z, np.inf), out=sub)


def footprint_accumulate(lower, upper, corners, x0, y0, inv_cell):
    """Accumulate per-cell z extents of triangles into lower/upper grids."""
    ny, nx = lower.shape
    if corners.shape[0] == 0:
        return
    x_min = corners[:, :, 0].min(axis=1)
    x_max = corners[:, :, 0].max(axis=1)
    y_min = corners[:, :, 1].min(axis=1)
    y_max = corners[:, :, 1].max(axis=1)
    z_min = corners[:, :, 2].min(axis=1)
    z_max = corners[:, :, 2].max(axis=1)
    i0 = np.floor((x_min - x0) * inv_cell).astype(np.int64)
    i1 = np.floor((x_max - x0) * inv_cell).astype(np.int64)
    j0 = np.floor((y_min - y0) * inv_cell).astype(np.int64)
    j1 = np.floor((y_max - y0) * inv_cell).astype(np.int64)
    for t in range(corners.shape[0]):
        a0, a1, b0, b1 = i0[t], i1[t], j0[t], j1[t]
        if a1 < 0 or b1 < 0 or a0 >= nx or b0 >= ny:
            continue
        a0 = max(a0, 0)
        b0 = max(b0, 0)
        a1 = min(a1, nx - 1)
        b1 = min(b1, ny - 1)
        sub = lower[b0 : b1 + 1, a0 : a1 + 1]
        np.minimum(sub, z_min[t], out=sub)
        sub = upper[b0 : b1 + 1, a0 : a1 + 1]
        np.maximum(sub, z_max[t], out=sub)


_OFFSETS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


def _shift(a, dr, dc, fill):
    """out[r, c] = a[r + dr, c + dc], out-of-bounds reads give ``fill``."""
    height, width = a.shape
    out = np.full(a.shape, fill, a.dtype)
    rd0, rd1 = max(0, -dr), height - max(0, dr)
    cd0, cd1 = max(0, -dc), width - max(0, dc)
    rs0, rs1 = max(0, dr), height - max(0, -dr)
    cs0, cs1 = max(0, dc), width - max(0, -dc)
    out[rd0:rd1, cd0:cd1] = a[rs0:rs1, cs0:cs1]
    return out


def inpaint_pass(src, dst):
    """One Jacobi pass of 8-neighbor mean fill; returns #pixels still invalid.

    Invalid neighbors contribute an exact 0.0 to the running sum, which is
    bit-equivalent to the numba backend skipping them.
    """
    valid = src > 0.0
    vals = np.where(valid, src, 0.0)
    s = np.zeros(src.shape, np.float64)
    cnt = np.zeros(src.shape, np.int64)
    for dr, dc in _OFFSETS:
        s = s + _shift(vals, dr, dc, 0.0)
        cnt = cnt + _shift(valid, dr, dc, False)
    with np.errstate(divide="ignore", invalid="ignore"):
        fill = s / cnt
    np.copyto(dst, np.where(valid, src, np.where(cnt > 0, fill, 0.0)))
    return int(np.count_nonzero(~valid & (cnt == 0)))


def region_grow_labels(neighbors, normals, curvature, valid, order, cos_thresh, curv_thresh):
    """Label points by region growing over a k-NN graph.

    Frontier-at-a-time BFS. Membership per region is a reachability closure,
    so the level-order exploration used here assigns exactly the same labels
    as the numba backend's queue.
    """
    n = neighbors.shape[0]
    k = neighbors.shape[1]
    labels = np.full(n, -1, np.int64)
    next_label = 0
    for seed in order:
        if labels[seed] != -1 or not valid[seed]:
            continue
        lab = next_label
        next_label += 1
        labels[seed] = lab
        front = np.array([seed], np.int64)
        while front.size:
            cand = neighbors[front].ravel()
            src = np.repeat(front, k)
            keep = (cand >= 0) & (cand < n)
            cand = cand[keep]
            src = src[keep]
            keep = valid[cand] & (labels[cand] == -1)
            cand = cand[keep]
            src = src[keep]
            if cand.size == 0:
                break
            dots = (
                normals[src, 0] * normals[cand, 0]
                + normals[src, 1] * normals[cand, 1]
                + normals[src, 2] * normals[cand, 2]
            )
            cand = cand[dots >= cos_thresh]
            if cand.size == 0:
                break
            cand = np.unique(cand)
            labels[cand] = lab
            front = cand[curvature[cand] <= curv_thresh]
    return labels
