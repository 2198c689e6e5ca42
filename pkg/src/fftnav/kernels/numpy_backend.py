"""Vectorized numpy implementations of the hot kernels.

This is the reference backend.  The numba backend mirrors these semantics
exactly, expression by expression, so both produce bit-identical results;
any change here must be applied there too.
"""

from __future__ import annotations

import heapq
import math

import numpy as np

SQRT2 = math.sqrt(2.0)

# Neighbor order is part of the A* contract: both backends must expand in
# this order so tie-broken paths come out identical.
_NEIGHBOR_OFFSETS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1))


def raycast(px, py, ux, uy, cx, cy, cr, xmin, ymin, xmax, ymax, rmax):
    """Distance along each ray direction to the nearest circle or wall.

    Rays start at ``(px, py)`` with unit directions ``(ux, uy)``; distances
    are clamped to ``rmax``.  The origin must lie inside the wall box.
    """
    ux = np.asarray(ux, dtype=np.float64)
    uy = np.asarray(uy, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        tx = np.where(ux > 0.0, (xmax - px) / ux, np.where(ux < 0.0, (xmin - px) / ux, np.inf))
        ty = np.where(uy > 0.0, (ymax - py) / uy, np.where(uy < 0.0, (ymin - py) / uy, np.inf))
    best = np.minimum(np.minimum(tx, ty), rmax)
    if cx.size:
        dx = cx[None, :] - px
        dy = cy[None, :] - py
        b = dx * ux[:, None] + dy * uy[:, None]
        c = dx * dx + dy * dy - cr[None, :] * cr[None, :]
        disc = b * b - c
        hit = disc >= 0.0
        s = np.sqrt(np.where(hit, disc, 0.0))
        t_near = b - s
        t = np.where(t_near >= 0.0, t_near, b + s)
        t = np.where(hit & (t >= 0.0), t, np.inf)
        best = np.minimum(best, t.min(axis=1))
    return best


def seg_clearance(px, py, qx, qy, ox, oy, orad):
    """Smallest clearance from circles to the segment ``(p, q)``.

    Returns ``min_i(dist(segment, center_i) - orad_i)``; ``+inf`` with no
    circles.  Point obstacles pass zero radii.
    """
    ox = np.asarray(ox, dtype=np.float64)
    if ox.size == 0:
        return np.inf
    oy = np.asarray(oy, dtype=np.float64)
    orad = np.asarray(orad, dtype=np.float64)
    vx = qx - px
    vy = qy - py
    vv = vx * vx + vy * vy
    if vv > 0.0:
        t = ((ox - px) * vx + (oy - py) * vy) / vv
        t = np.minimum(np.maximum(t, 0.0), 1.0)
    else:
        t = np.zeros_like(ox)
    dx = ox - (px + t * vx)
    dy = oy - (py + t * vy)
    return float(np.min(np.sqrt(dx * dx + dy * dy) - orad))


def find_extrema(y):
    """Strict local extrema of a circular sequence with plateau handling.

    Equal-valued runs are treated as one sample at their center index; a
    run is a maximum when both neighboring runs are lower, a minimum when
    both are higher.  Returns ``(indices, kinds)`` sorted by index, kind 1
    for maxima and 0 for minima.  A constant sequence yields empty arrays.
    """
    y = np.asarray(y, dtype=np.float64)
    m = y.size
    starts = np.flatnonzero(y != np.roll(y, 1))
    k = starts.size
    if k == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.uint8)
    vals = y[starts]
    idx = []
    kinds = []
    for i in range(k):
        v = vals[i]
        prev_v = vals[i - 1]
        next_v = vals[(i + 1) % k]
        if v > prev_v and v > next_v:
            kind = 1
        elif v < prev_v and v < next_v:
            kind = 0
        else:
            continue
        run_len = (starts[(i + 1) % k] - starts[i]) % m
        center = (starts[i] + (run_len - 1) // 2) % m
        idx.append(center)
        kinds.append(kind)
    order = np.argsort(np.asarray(idx, dtype=np.int64), kind="stable")
    return (
        np.asarray(idx, dtype=np.int64)[order],
        np.asarray(kinds, dtype=np.uint8)[order],
    )


def astar(blocked, sx, sy, gx, gy):
    """8-connected A* over a blocked grid; returns the cell path.

    Costs are 1 for straight steps and sqrt(2) for diagonals, with a
    Euclidean heuristic.  Ties are broken by push order, which is fully
    determined by the fixed neighbor offsets, so the returned path is
    deterministic.  An empty array means no path.
    """
    nx, ny = blocked.shape
    if blocked[sx, sy] or blocked[gx, gy]:
        return np.empty((0, 2), dtype=np.int32)
    n = nx * ny
    g = np.full(n, np.inf)
    came = np.full(n, -1, dtype=np.int64)
    closed = np.zeros(n, dtype=np.uint8)
    start = sx * ny + sy
    goal = gx * ny + gy
    g[start] = 0.0
    seq = 0
    heap = [(math.sqrt(float((sx - gx) ** 2 + (sy - gy) ** 2)), seq, start)]
    while heap:
        _, _, node = heapq.heappop(heap)
        if node == goal:
            break
        if closed[node]:
            continue
        closed[node] = 1
        ix = node // ny
        iy = node % ny
        gn = g[node]
        for dx, dy in _NEIGHBOR_OFFSETS:
            jx = ix + dx
            jy = iy + dy
            if jx < 0 or jx >= nx or jy < 0 or jy >= ny:
                continue
            nb = jx * ny + jy
            if blocked[jx, jy] or closed[nb]:
                continue
            step = 1.0 if dx == 0 or dy == 0 else SQRT2
            ng = gn + step
            if ng < g[nb]:
                g[nb] = ng
                came[nb] = node
                h = math.sqrt(float((jx - gx) ** 2 + (jy - gy) ** 2))
                seq += 1
                heapq.heappush(heap, (ng + h, seq, nb))
    if not np.isfinite(g[goal]):
        return np.empty((0, 2), dtype=np.int32)
    rev = []
    node = goal
    while node != -1:
        rev.append(node)
        node = came[node]
    path = np.empty((len(rev), 2), dtype=np.int32)
    for i, node in enumerate(reversed(rev)):
        path[i, 0] = node // ny
        path[i, 1] = node % ny
    return path
