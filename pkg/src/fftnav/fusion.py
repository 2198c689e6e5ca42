"""Probability-domain fusion of own and neighbor observations.

When a robot meets an obstacle it must pick a side to follow.  Its own
scan gives a turn-left probability from the open-space areas of the four
planning quadrants; each neighbor's compressed observation gives a
passability probability toward the robot's goal.  A weighted sum in the
probability domain produces the fused turn-left probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import ProtectiveModel, Quadrants, SensorConfig, TWO_PI, wrap_angle
from .perception import CompressedObservation, ReconstructedScan

SIDE_LEFT = "left"
SIDE_RIGHT = "right"


def sigmoid(z: float) -> float:
    """Logistic function, stable for any finite argument."""
    if z >= 0.0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def _polygon_vertices(source):
    """Sorted (angle, value) vertex arrays of the piecewise-linear polygon.

    Angles come out wrapped to (-pi, pi] and ascending.  A compressed
    observation contributes its extrema; a reconstructed scan contributes
    every sample of its circular grid.
    """
    if isinstance(source, CompressedObservation):
        phis = source.phis
        ds = source.ds
    elif isinstance(source, ReconstructedScan):
        m = source.samples.size
        phis = np.arange(m) * (TWO_PI / m)
        ds = source.samples
    else:
        raise TypeError(f"cannot take polygon vertices of {type(source).__name__}")
    wrapped = np.array([wrap_angle(p) for p in np.asarray(phis, dtype=np.float64)])
    order = np.argsort(wrapped, kind="stable")
    return wrapped[order], np.asarray(ds, dtype=np.float64)[order]


def _interp_circular(phis, ds, angle):
    """Value of the circular piecewise-linear polygon at an angle."""
    a = wrap_angle(angle)
    n = phis.size
    if n == 1:
        return float(ds[0])
    j = int(np.searchsorted(phis, a))
    hi = j % n
    lo = hi - 1
    gap = (phis[hi] - phis[lo]) % TWO_PI
    if gap <= 1e-15:
        return float(ds[lo])
    frac = ((a - phis[lo]) % TWO_PI) / gap
    return float(ds[lo] + (ds[hi] - ds[lo]) * frac)


def quadrant_areas(source, model: ProtectiveModel) -> np.ndarray:
    """Open-space area of the observation polygon in each planning quadrant.

    Per quadrant, the vertices falling inside it plus interpolated values
    at the two quadrant boundaries form a triangle fan from the robot;
    the areas ``0.5 * d_j * d_{j+1} * sin(dphi)`` are summed.  Returns the
    4-vector ordered I, II, III, IV.
    """
    phis, ds = _polygon_vertices(source)
    quads = Quadrants(model)
    areas = np.zeros(4)
    for k, name in enumerate(("I", "II", "III", "IV")):
        lo, hi = quads.boundaries[name]
        inside = (phis > lo) & (phis < hi)
        seq_phi = np.concatenate(([lo], phis[inside], [hi]))
        seq_d = np.concatenate(
            ([_interp_circular(phis, ds, lo)], ds[inside], [_interp_circular(phis, ds, hi)])
        )
        dphi = np.diff(seq_phi)
        areas[k] = float(np.sum(0.5 * seq_d[:-1] * seq_d[1:] * np.sin(dphi)))
    return areas


def p_self(x0, w_s: float = 1.0, b0: float = 0.0) -> float:
    """Turn-left probability from the quadrant area vector.

    The weight vector is ``[w_s, 1, -1, -w_s] / (1 + w_s)``: left quadrants
    push left, right quadrants push right, with ``w_s`` trading off the
    safety sector against the side areas.
    """
    x = np.asarray(x0, dtype=np.float64)
    if x.shape != (4,):
        raise ValueError(f"x0 must be a 4-vector, got shape {x.shape}")
    w = np.array([w_s, 1.0, -1.0, -w_s]) / (1.0 + w_s)
    return sigmoid(float(w @ x) + b0)


def neighbor_threshold(model: ProtectiveModel, cfg: SensorConfig) -> float:
    """Threshold paired with neighbor passability, normalized by range.

    Twice the longitudinal safety scale ``l_th + r`` corrected by the
    collision radius, negated: a neighbor only reports passable when its
    sector depth clears this much.
    """
    return -(2.0 * (model.l_th + model.r) + model.r0) / cfg.range_max


def p_neighbor(
    obs: CompressedObservation,
    model: ProtectiveModel,
    cfg: SensorConfig,
    target_direction: float,
) -> float:
    """Passability probability toward a target direction at the sender.

    Looks at extrema inside the safety-sector-wide cone around
    ``target_direction`` (in the sender's frame).  With no minima there,
    the depth is the greatest extremum value, or the larger interpolated
    boundary value when the cone holds no extrema at all; with minima
    present, the average of the extreme values is used.
    """
    half = 0.5 * model.alpha
    rel = np.array([wrap_angle(p - target_direction) for p in obs.phis])
    in_sector = np.abs(rel) <= half
    if not in_sector.any():
        phis, ds = _polygon_vertices(obs)
        x = max(
            _interp_circular(phis, ds, target_direction - half),
            _interp_circular(phis, ds, target_direction + half),
        )
    else:
        vals = obs.ds[in_sector]
        has_min = bool((obs.kinds[in_sector] == 0).any())
        if has_min:
            x = 0.5 * (float(vals.max()) + float(vals.min()))
        else:
            x = float(vals.max())
    return sigmoid(x + neighbor_threshold(model, cfg))


@dataclass(frozen=True)
class NeighborReading:
    """One neighbor's contribution before weighting."""

    sender_id: int
    side: str
    p_i: float
    distance: float


@dataclass(frozen=True)
class FusionEntry:
    sender_id: int
    side: str
    p_i: float
    weight: float
    distance: float
    included: bool


@dataclass(frozen=True)
class FusionState:
    """Everything that went into one fused decision."""

    p_s: float
    entries: tuple
    w0: float
    p: float


def fuse(
    p_s: float,
    neighbors,
    model: ProtectiveModel,
    cfg: SensorConfig,
) -> FusionState:
    """Weighted probability fusion with distance-based exclusion.

    Neighbors closer than ``2r`` (overlapping protective radius), farther
    than the sensor range, or outside the forward quadrants get weight 0.
    The k survivors share weight ``w0 / 3`` each with ``w0 = 3 / (3 + k)``,
    so all weights sum to 1.  Right-side neighbors contribute mirrored
    probabilities ``1 - P_i``.  With everyone excluded the result is the
    robot's own probability.
    """
    included = []
    for nb in neighbors:
        ok = (
            nb.side in (SIDE_LEFT, SIDE_RIGHT)
            and 2.0 * model.r <= nb.distance <= cfg.range_max
        )
        included.append(ok)
    k = sum(included)
    w0 = 3.0 / (3.0 + k)
    wi = w0 / 3.0
    p = w0 * p_s
    entries = []
    for nb, ok in zip(neighbors, included):
        weight = wi if ok else 0.0
        if ok:
            p += weight * (nb.p_i if nb.side == SIDE_LEFT else 1.0 - nb.p_i)
        entries.append(
            FusionEntry(nb.sender_id, nb.side, nb.p_i, weight, nb.distance, ok)
        )
    return FusionState(p_s=p_s, entries=tuple(entries), w0=w0, p=p)


def decide_side(p: float) -> str:
    """Map a fused probability to a boundary-follow side; ties go left."""
    return SIDE_LEFT if p >= 0.5 else SIDE_RIGHT
