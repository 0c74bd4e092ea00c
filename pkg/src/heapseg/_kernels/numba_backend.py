"""Numba implementations of the hot kernels.

Formula order mirrors numpy_backend exactly so results are bit-identical.
No fastmath anywhere: plain IEEE semantics.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def raster_triangles(depth, uv, w, near, far):
    """Min-update ``depth`` (float64, +inf = empty) with screen triangles.

    uv: (T, 3, 2) screen-space vertex positions, w: (T, 3) inverse depths.
    Pixel centers sit at (ix + 0.5, iy + 0.5). Coverage uses the top-left
    fill rule; 1/z is interpolated (affine in screen space) and fragments
    outside [near, far] are rejected.
    """
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
        # edge inclusion when E == 0: top edge (dy==0, dx>0) or left edge (dy<0)
        ab_in = (aby == 0.0 and abx > 0.0) or aby < 0.0
        bc_in = (bcy == 0.0 and bcx > 0.0) or bcy < 0.0
        ca_in = (cay == 0.0 and cax > 0.0) or cay < 0.0
        min_u = min(ax, min(bx, cx))
        max_u = max(ax, max(bx, cx))
        min_v = min(ay, min(by, cy))
        max_v = max(ay, max(by, cy))
        ix0 = int(math.ceil(min_u - 0.5))
        ix1 = int(math.floor(max_u - 0.5))
        iy0 = int(math.ceil(min_v - 0.5))
        iy1 = int(math.floor(max_v - 0.5))
        if ix0 < 0:
            ix0 = 0
        if iy0 < 0:
            iy0 = 0
        if ix1 > width - 1:
            ix1 = width - 1
        if iy1 > height - 1:
            iy1 = height - 1
        for iy in range(iy0, iy1 + 1):
            py = iy + 0.5
            for ix in range(ix0, ix1 + 1):
                px = ix + 0.5
                e_ab = abx * (py - ay) - aby * (px - ax)
                e_bc = bcx * (py - by) - bcy * (px - bx)
                e_ca = cax * (py - cy) - cay * (px - cx)
                if e_ab < 0.0 or e_bc < 0.0 or e_ca < 0.0:
                    continue
                if e_ab == 0.0 and not ab_in:
                    continue
                if e_bc == 0.0 and not bc_in:
                    continue
                if e_ca == 0.0 and not ca_in:
                    continue
                wi = (e_bc * wa + e_ca * wb + e_ab * wc) / area
                z = 1.0 / wi
                if z < near or z > far:
                    continue
                if z < depth[iy, ix]:
                    depth[iy, ix] = z


@njit(cache=True)
def footprint_accumulate(lower, upper, corners, x0, y0, inv_cell):
    """Accumulate per-cell z extents of triangles into lower/upper grids.

    Conservative coverage: a cell is touched when the triangle's XY AABB
    overlaps it. lower starts at +inf, upper at -inf; min/max updates only,
    so accumulation order does not matter.
    """
    ny, nx = lower.shape
    for t in range(corners.shape[0]):
        xa = corners[t, 0, 0]
        xb = corners[t, 1, 0]
        xc = corners[t, 2, 0]
        ya = corners[t, 0, 1]
        yb = corners[t, 1, 1]
        yc = corners[t, 2, 1]
        za = corners[t, 0, 2]
        zb = corners[t, 1, 2]
        zc = corners[t, 2, 2]
        x_min = min(xa, min(xb, xc))
        x_max = max(xa, max(xb, xc))
        y_min = min(ya, min(yb, yc))
        y_max = max(ya, max(yb, yc))
        z_min = min(za, min(zb, zc))
        z_max = max(za, max(zb, zc))
        i0 = int(math.floor((x_min - x0) * inv_cell))
        i1 = int(math.floor((x_max - x0) * inv_cell))
        j0 = int(math.floor((y_min - y0) * inv_cell))
        j1 = int(math.floor((y_max - y0) * inv_cell))
        if i1 < 0 or j1 < 0 or i0 >= nx or j0 >= ny:
            continue
        if i0 < 0:
            i0 = 0
        if j0 < 0:
            j0 = 0
        if i1 > nx - 1:
            i1 = nx - 1
        if j1 > ny - 1:
            j1 = ny - 1
        for j in range(j0, j1 + 1):
            for i in range(i0, i1 + 1):
                if z_min < lower[j, i]:
                    lower[j, i] = z_min
                if z_max > upper[j, i]:
                    upper[j, i] = z_max


@njit(cache=True)
def inpaint_pass(src, dst):
    """One Jacobi pass of 8-neighbor mean fill; returns #pixels still invalid.

    Valid pixels (> 0) copy through unchanged. Neighbor accumulation order is
    row-major over the 3x3 window, matching numpy_backend bit for bit.
    """
    height, width = src.shape
    remaining = 0
    for r in range(height):
        for c in range(width):
            v = src[r, c]
            if v > 0.0:
                dst[r, c] = v
                continue
            s = 0.0
            cnt = 0
            for dr in range(-1, 2):
                for dc in range(-1, 2):
                    if dr == 0 and dc == 0:
                        continue
                    rr = r + dr
                    cc = c + dc
                    if rr < 0 or rr >= height or cc < 0 or cc >= width:
                        continue
                    nv = src[rr, cc]
                    if nv > 0.0:
                        s = s + nv
                        cnt += 1
            if cnt > 0:
                dst[r, c] = s / cnt
            else:
                dst[r, c] = 0.0
                remaining += 1
    return remaining


@njit(cache=True)
def region_grow_labels(neighbors, normals, curvature, valid, order, cos_thresh, curv_thresh):
    """Label points by region growing over a k-NN graph.

    Seeds are taken from ``order`` (ascending curvature, ties by index). A
    neighbor q of front point p joins p's region when dot(n_p, n_q) >=
    cos_thresh; it extends the front only when its curvature <= curv_thresh.
    Region membership is a reachability closure, so it does not depend on
    exploration order. Returns int64 labels, -1 = unassigned.
    """
    n = neighbors.shape[0]
    k = neighbors.shape[1]
    labels = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    next_label = 0
    for oi in range(order.shape[0]):
        seed = order[oi]
        if labels[seed] != -1 or not valid[seed]:
            continue
        lab = next_label
        next_label += 1
        labels[seed] = lab
        queue[0] = seed
        head = 0
        tail = 1
        while head < tail:
            p = queue[head]
            head += 1
            nx = normals[p, 0]
            ny = normals[p, 1]
            nz = normals[p, 2]
            for j in range(k):
                q = neighbors[p, j]
                if q < 0 or q >= n:
                    continue
                if not valid[q] or labels[q] != -1:
                    continue
                dot = nx * normals[q, 0] + ny * normals[q, 1] + nz * normals[q, 2]
                if dot >= cos_thresh:
                    labels[q] = lab
                    if curvature[q] <= curv_thresh:
                        queue[tail] = q
                        tail += 1
    return labels
