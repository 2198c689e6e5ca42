"""Simulated range sensor: analytic raycasting against circles and walls."""

from __future__ import annotations

import numpy as np

from .. import kernels
from ..geometry import SensorConfig, TWO_PI
from ..perception import Scan
from .world import World

_blind_cache = {}


def blind_mask(cfg: SensorConfig) -> np.ndarray:
    """Boolean mask of sample indices inside the sensor's blind arc."""
    key = (cfg.theta_fov, cfg.m, cfg.blind_arc)
    cached = _blind_cache.get(key)
    if cached is not None:
        return cached
    mask = np.zeros(cfg.m, dtype=bool)
    if cfg.blind_arc is not None:
        lo, hi = cfg.blind_arc
        angles = np.arange(cfg.m) * cfg.angular_resolution
        lo = lo % TWO_PI
        hi = hi % TWO_PI
        if lo <= hi:
            mask = (angles >= lo) & (angles <= hi)
        else:
            mask = (angles >= lo) | (angles <= hi)
    _blind_cache[key] = mask
    return mask


def raycast_scan(
    world: World,
    pose,
    cfg: SensorConfig,
    extra_circles=None,
    stamp: int = 0,
) -> Scan:
    """Scan from a pose: nearest circle or wall hit per ray, normalized.

    ``pose`` is ``(x, y, heading)``.  ``extra_circles`` adds dynamic
    obstacles (other robots) as an ``(k, 3)`` array of x, y, radius.
    Distances clamp to the sensor range and blind-arc samples read zero.
    """
    x, y, heading = pose
    rel = np.arange(cfg.m) * cfg.angular_resolution
    ang = heading + rel
    ux = np.cos(ang)
    uy = np.sin(ang)
    cx, cy, cr = world.cx, world.cy, world.cr
    if extra_circles is not None and len(extra_circles):
        extra = np.asarray(extra_circles, dtype=np.float64).reshape(-1, 3)
        cx = np.concatenate([cx, extra[:, 0]])
        cy = np.concatenate([cy, extra[:, 1]])
        cr = np.concatenate([cr, extra[:, 2]])
    w, h = world.extent
    dist = kernels.raycast(
        float(x), float(y), ux, uy, cx, cy, cr, 0.0, 0.0, float(w), float(h), cfg.range_max
    )
    samples = dist / cfg.range_max
    samples[blind_mask(cfg)] = 0.0
    return Scan(samples=samples, cfg=cfg, heading=float(heading), stamp=stamp)
