"""Optimal-path oracle: grid A* with obstacle inflation and shortcutting.

The returned length is a reference lower bound for judging executed
paths, so the grid path is post-processed with line-of-sight shortcuts
at the same inflation; that removes most of the octile discretization
overhead while staying feasible for a disc robot of the given radius.
"""

from __future__ import annotations

import math

import numpy as np

from .. import kernels
from ..sim.world import World


class NoPathError(RuntimeError):
    """Start or goal is unreachable on the inflated grid."""


def _blocked_grid(world: World, resolution: float, inflation: float) -> np.ndarray:
    w, h = world.extent
    nx = int(round(w / resolution))
    ny = int(round(h / resolution))
    blocked = np.zeros((nx, ny), dtype=np.bool_)
    centers_x = (np.arange(nx) + 0.5) * resolution
    centers_y = (np.arange(ny) + 0.5) * resolution
    border = centers_x < inflation
    blocked[border, :] = True
    blocked[centers_x > w - inflation, :] = True
    blocked[:, centers_y < inflation] = True
    blocked[:, centers_y > h - inflation] = True
    for cx, cy, cr in zip(world.cx, world.cy, world.cr):
        reach = cr + inflation
        i0 = max(int((cx - reach) / resolution) - 1, 0)
        i1 = min(int((cx + reach) / resolution) + 2, nx)
        j0 = max(int((cy - reach) / resolution) - 1, 0)
        j1 = min(int((cy + reach) / resolution) + 2, ny)
        if i0 >= i1 or j0 >= j1:
            continue
        dx = centers_x[i0:i1, None] - cx
        dy = centers_y[None, j0:j1] - cy
        blocked[i0:i1, j0:j1] |= dx * dx + dy * dy < reach * reach
    return blocked


def _cell_of(p, resolution: float, shape) -> tuple:
    ix = min(max(int(p[0] / resolution), 0), shape[0] - 1)
    iy = min(max(int(p[1] / resolution), 0), shape[1] - 1)
    return ix, iy


def _segment_free(p, q, world: World, inflation: float) -> bool:
    if kernels.seg_clearance(p[0], p[1], q[0], q[1], world.cx, world.cy, world.cr) < inflation:
        return False
    w, h = world.extent
    for x, y in (p, q):
        if x < inflation or x > w - inflation or y < inflation or y > h - inflation:
            return False
    return True


def _shortcut(points, world: World, inflation: float):
    """Greedy line-of-sight smoothing; always jumps to the farthest
    visible waypoint so the result length never exceeds the input."""
    out = [points[0]]
    i = 0
    n = len(points)
    while i < n - 1:
        j = n - 1
        while j > i + 1 and not _segment_free(points[i], points[j], world, inflation):
            j -= 1
        out.append(points[j])
        i = j
    return out


def astar_optimal(
    world: World,
    start,
    goal,
    resolution: float = 0.05,
    inflation: float = 0.15,
    smooth: bool = True,
) -> float:
    """Length in meters of a near-optimal feasible path, or NoPathError.

    Obstacles and walls are inflated by the robot radius so the length
    is achievable by a disc robot; the grid path uses octile costs and
    is then shortcut against the continuous world.
    """
    blocked = _blocked_grid(world, resolution, inflation)
    s = _cell_of(start, resolution, blocked.shape)
    g = _cell_of(goal, resolution, blocked.shape)
    if blocked[s]:
        raise NoPathError(f"start {tuple(start)} lies in inflated obstacle space")
    if blocked[g]:
        raise NoPathError(f"goal {tuple(goal)} lies in inflated obstacle space")
    cells = kernels.astar(blocked, s[0], s[1], g[0], g[1])
    if cells.shape[0] == 0:
        raise NoPathError(f"no path from {tuple(start)} to {tuple(goal)}")
    points = [(float(start[0]), float(start[1]))]
    for ix, iy in cells[1:-1]:
        points.append(((ix + 0.5) * resolution, (iy + 0.5) * resolution))
    points.append((float(goal[0]), float(goal[1])))
    if smooth and len(points) > 2:
        points = _shortcut(points, world, inflation)
    length = 0.0
    for a, b in zip(points[:-1], points[1:]):
        length += math.hypot(b[0] - a[0], b[1] - a[1])
    return length
