"""numba implementations of the hot kernels.

Mirrors :mod:`fftnav.kernels.numpy_backend` expression by expression.  No
fastmath: both backends must evaluate the same IEEE float operations so
results are bit-identical and traces stay backend-independent.
"""

from __future__ import annotations

import math

import numpy as np
import numba as nb

NJIT_KW = dict(cache=True, nogil=True)

SQRT2 = math.sqrt(2.0)


@nb.njit(**NJIT_KW)
def raycast(px, py, ux, uy, cx, cy, cr, xmin, ymin, xmax, ymax, rmax):
    m = ux.shape[0]
    out = np.empty(m, dtype=np.float64)
    for i in range(m):
        uxi = ux[i]
        uyi = uy[i]
        if uxi > 0.0:
            tx = (xmax - px) / uxi
        elif uxi < 0.0:
            tx = (xmin - px) / uxi
        else:
            tx = np.inf
        if uyi > 0.0:
            ty = (ymax - py) / uyi
        elif uyi < 0.0:
            ty = (ymin - py) / uyi
        else:
            ty = np.inf
        best = min(min(tx, ty), rmax)
        for k in range(cx.shape[0]):
            dx = cx[k] - px
            dy = cy[k] - py
            b = dx * uxi + dy * uyi
            c = dx * dx + dy * dy - cr[k] * cr[k]
            disc = b * b - c
            if disc >= 0.0:
                s = math.sqrt(disc)
                t = b - s
                if t < 0.0:
                    t = b + s
                if t >= 0.0 and t < best:
                    best = t
        out[i] = best
    return out


@nb.njit(**NJIT_KW)
def seg_clearance(px, py, qx, qy, ox, oy, orad):
    n = ox.shape[0]
    if n == 0:
        return np.inf
    vx = qx - px
    vy = qy - py
    vv = vx * vx + vy * vy
    best = np.inf
    for i in range(n):
        if vv > 0.0:
            t = ((ox[i] - px) * vx + (oy[i] - py) * vy) / vv
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
        else:
            t = 0.0
        dx = ox[i] - (px + t * vx)
        dy = oy[i] - (py + t * vy)
        d = math.sqrt(dx * dx + dy * dy) - orad[i]
        if d < best:
            best = d
    return best


@nb.njit(**NJIT_KW)
def find_extrema(y):
    m = y.shape[0]
    starts = np.empty(m, dtype=np.int64)
    k = 0
    for i in range(m):
        prev = y[i - 1] if i > 0 else y[m - 1]
        if y[i] != prev:
            starts[k] = i
            k += 1
    idx = np.empty(m, dtype=np.int64)
    kinds = np.empty(m, dtype=np.uint8)
    if k == 0:
        return idx[:0], kinds[:0]
    cnt = 0
    for i in range(k):
        v = y[starts[i]]
        prev_v = y[starts[i - 1]] if i > 0 else y[starts[k - 1]]
        next_v = y[starts[(i + 1) % k]]
        if v > prev_v and v > next_v:
            kind = np.uint8(1)
        elif v < prev_v and v < next_v:
            kind = np.uint8(0)
        else:
            continue
        run_len = (starts[(i + 1) % k] - starts[i]) % m
        idx[cnt] = (starts[i] + (run_len - 1) // 2) % m
        kinds[cnt] = kind
        cnt += 1
    order = np.argsort(idx[:cnt])
    return idx[:cnt][order], kinds[:cnt][order]


@nb.njit(**NJIT_KW)
def _heap_less(hf, hs, a, b):
    return hf[a] < hf[b] or (hf[a] == hf[b] and hs[a] < hs[b])


@nb.njit(**NJIT_KW)
def _heap_swap(hf, hs, hn, a, b):
    hf[a], hf[b] = hf[b], hf[a]
    hs[a], hs[b] = hs[b], hs[a]
    hn[a], hn[b] = hn[b], hn[a]


@nb.njit(**NJIT_KW)
def astar(blocked, sx, sy, gx, gy):
    nx, ny = blocked.shape
    empty = np.empty((0, 2), dtype=np.int32)
    if blocked[sx, sy] or blocked[gx, gy]:
        return empty
    n = nx * ny
    g = np.full(n, np.inf)
    came = np.full(n, -1, dtype=np.int64)
    closed = np.zeros(n, dtype=np.uint8)
    cap = 8 * n + 8
    heap_f = np.empty(cap, dtype=np.float64)
    heap_s = np.empty(cap, dtype=np.int64)
    heap_n = np.empty(cap, dtype=np.int64)
    size = 0
    start = sx * ny + sy
    goal = gx * ny + gy
    g[start] = 0.0
    seq = 0
    heap_f[0] = math.sqrt(float((sx - gx) ** 2 + (sy - gy) ** 2))
    heap_s[0] = seq
    heap_n[0] = start
    size = 1
    while size > 0:
        node = heap_n[0]
        size -= 1
        heap_f[0] = heap_f[size]
        heap_s[0] = heap_s[size]
        heap_n[0] = heap_n[size]
        i = 0
        while True:
            left = 2 * i + 1
            right = left + 1
            small = i
            if left < size and _heap_less(heap_f, heap_s, left, small):
                small = left
            if right < size and _heap_less(heap_f, heap_s, right, small):
                small = right
            if small == i:
                break
            _heap_swap(heap_f, heap_s, heap_n, i, small)
            i = small
        if node == goal:
            break
        if closed[node]:
            continue
        closed[node] = 1
        ix = node // ny
        iy = node % ny
        gn = g[node]
        for off in range(8):
            if off == 0:
                dx, dy = 1, 0
            elif off == 1:
                dx, dy = -1, 0
            elif off == 2:
                dx, dy = 0, 1
            elif off == 3:
                dx, dy = 0, -1
            elif off == 4:
                dx, dy = 1, 1
            elif off == 5:
                dx, dy = 1, -1
            elif off == 6:
                dx, dy = -1, 1
            else:
                dx, dy = -1, -1
            jx = ix + dx
            jy = iy + dy
            if jx < 0 or jx >= nx or jy < 0 or jy >= ny:
                continue
            nb_ = jx * ny + jy
            if blocked[jx, jy] or closed[nb_]:
                continue
            step = 1.0 if dx == 0 or dy == 0 else SQRT2
            ng = gn + step
            if ng < g[nb_]:
                g[nb_] = ng
                came[nb_] = node
                h = math.sqrt(float((jx - gx) ** 2 + (jy - gy) ** 2))
                seq += 1
                heap_f[size] = ng + h
                heap_s[size] = seq
                heap_n[size] = nb_
                j = size
                size += 1
                while j > 0:
                    parent = (j - 1) // 2
                    if _heap_less(heap_f, heap_s, j, parent):
                        _heap_swap(heap_f, heap_s, heap_n, j, parent)
                        j = parent
                    else:
                        break
    if not np.isfinite(g[goal]):
        return empty
    length = 0
    node = goal
    while node != -1:
        length += 1
        node = came[node]
    path = np.empty((length, 2), dtype=np.int32)
    node = goal
    for i in range(length - 1, -1, -1):
        path[i, 0] = node // ny
        path[i, 1] = node % ny
        node = came[node]
    return path
