"""Scan interpretation: safe directions, extrema compression, wire codec.

A normalized range scan is truncated at the planning distance, pushed
through the safe-window filter, and thresholded to get the set of
directions the robot may advance along.  Separately, the scan is smoothed
by the lowpass filter and reduced to its local extrema, which travel over
the wire as a few dozen bytes and are reconstructed by receivers through
piecewise-linear interpolation.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .filters import FilterBank, FilterSpec, build_h1, filter_1d, filter_2d, filter_circular
from .geometry import (
    ProtectiveModel,
    SensorConfig,
    TWO_PI,
    cutoff_frequency,
    wrap_angle,
)

THRESHOLD_EPS = 1e-9

_SNAP = 1e-9

_WIRE_MAGIC = 0xA5
_WIRE_VERSION = 1
_HEADER = struct.Struct("<BBHHB")
_EXTREMUM = struct.Struct("<HH")
_ANGLE_TICK = TWO_PI / 65536.0


@dataclass
class Scan:
    """One normalized circular range observation."""

    samples: np.ndarray
    cfg: SensorConfig
    heading: float = 0.0
    stamp: int = 0

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.shape != (self.cfg.m,):
            raise ValueError(
                f"scan length {self.samples.shape} does not match sensor m={self.cfg.m}"
            )


@dataclass
class SafeDirections:
    """Angular intervals, relative to heading, that pass the safe condition.

    Each interval is ``(start, end)`` with ``end = start + width``; ``end``
    may exceed pi for intervals crossing the rear seam.  ``scale`` records
    the planning distance the test used.
    """

    intervals: list
    scale: float

    @property
    def empty(self) -> bool:
        return not self.intervals

    def contains(self, angle: float) -> bool:
        for start, end in self.intervals:
            if ((angle - start) % TWO_PI) <= (end - start) + 1e-12:
                return True
        return False

    def closest_direction(self, target: float):
        """Safe direction nearest the target angle, or None when empty.

        Returns the target itself when it lies inside an interval,
        otherwise the nearest interval endpoint, as a wrapped angle.
        """
        best = None
        best_err = np.inf
        for start, end in self.intervals:
            if ((target - start) % TWO_PI) <= (end - start) + 1e-12:
                return wrap_angle(target)
            for endpoint in (start, end):
                err = abs(wrap_angle(endpoint - target))
                if err < best_err:
                    best_err = err
                    best = wrap_angle(endpoint)
        return best


def extract_safe_directions(
    scan: Scan, model: ProtectiveModel, bank: FilterBank
) -> SafeDirections:
    """Directions where the filtered scan certifies the planning distance.

    The scan is truncated at ``l_th / R``, filtered with the safe window,
    and index ``i`` is safe when the output stays within threshold epsilon
    of the cap.  Full-circle scans are filtered circularly so every index
    is valid; partial-FOV scans exclude indices outside ``(tc, m - tc)``.
    Consecutive safe indices merge into angular intervals.
    """
    mask = safe_index_mask(scan, model, bank)
    return SafeDirections(_mask_to_intervals(mask, scan.cfg), model.l_th)


def safe_index_mask(scan: Scan, model: ProtectiveModel, bank: FilterBank):
    """Boolean per-index form of :func:`extract_safe_directions`."""
    cfg = scan.cfg
    cap = model.l_th / cfg.range_max
    if cap > 1.0 + THRESHOLD_EPS:
        return np.zeros(cfg.m, dtype=bool)
    trunc = np.minimum(scan.samples, cap)
    spec = bank.h1
    if cfg.full_circle:
        y = filter_circular(trunc, spec, bank)
        valid = np.ones(cfg.m, dtype=bool)
    else:
        y = filter_1d(trunc, spec, bank)
        valid = np.zeros(cfg.m, dtype=bool)
        valid[spec.tc + 1 : cfg.m - spec.tc] = True
    return (y >= cap - THRESHOLD_EPS) & valid


def _mask_to_intervals(safe, cfg: SensorConfig):
    m = cfg.m
    step = cfg.angular_resolution
    if not safe.any():
        return []
    if safe.all():
        return [(-math.pi, math.pi)]
    # circular run extraction: roll so the array starts on an unsafe index
    first_unsafe = int(np.flatnonzero(~safe)[0])
    rolled = np.roll(safe, -first_unsafe)
    edges = np.flatnonzero(np.diff(rolled.astype(np.int8)))
    intervals = []
    k = 0
    while k < edges.size:
        run_start = edges[k] + 1
        run_end = edges[k + 1] if k + 1 < edges.size else m - 1
        i0 = (run_start + first_unsafe) % m
        width = (run_end - run_start) * step
        start = wrap_angle(i0 * step)
        intervals.append((start, start + width))
        k += 2
    return intervals


def extract_safe_mask_3d(
    depth,
    model: ProtectiveModel,
    range_max: float = 1.0,
    fov_rows: float = 0.5 * math.pi,
    fov_cols: float = 0.5 * math.pi,
):
    """Passability mask for a depth image at the planning distance scale.

    Applies the truncate-filter-threshold pipeline separably (rows, then
    columns) with per-axis window widths derived from the per-axis FOV.
    Indices outside the per-axis ``(tc, m - tc)`` interior are never safe.
    """
    g = np.asarray(depth, dtype=np.float64)
    if g.ndim != 2:
        raise ValueError(f"expected a 2D depth grid, got shape {g.shape}")
    rows, cols = g.shape
    cap = model.l_th / range_max
    if cap > 1.0 + THRESHOLD_EPS:
        return np.zeros_like(g, dtype=bool)
    tc_rows = _axis_window(fov_rows, rows, model)
    tc_cols = _axis_window(fov_cols, cols, model)
    row_spec = build_h1(cols, tc_cols)
    col_spec = build_h1(rows, tc_rows)
    y = filter_2d(np.minimum(g, cap), row_spec, col_spec)
    mask = y >= cap - THRESHOLD_EPS
    interior = np.zeros_like(mask)
    interior[tc_rows + 1 : rows - tc_rows, tc_cols + 1 : cols - tc_cols] = True
    return mask & interior


def _axis_window(fov, m, model):
    cfg = SensorConfig(theta_fov=fov, m=m, range_max=1.0)
    return cutoff_frequency(cfg, model).tc


@dataclass
class CompressedObservation:
    """Extrema-only form of a scan: ordered (angle, distance) pairs.

    Angles are radians in the sender's scan frame (counterclockwise from
    the sender's heading), distances normalized to [0, 1].  ``kinds`` is 1
    for maxima and 0 for minima.
    """

    sender_id: int
    sender_heading: float
    phis: np.ndarray
    ds: np.ndarray
    kinds: np.ndarray

    def __post_init__(self):
        self.phis = np.asarray(self.phis, dtype=np.float64)
        self.ds = np.asarray(self.ds, dtype=np.float64)
        self.kinds = np.asarray(self.kinds, dtype=np.uint8)
        if not (self.phis.shape == self.ds.shape == self.kinds.shape):
            raise ValueError("phis, ds, kinds must have matching lengths")

    @property
    def count(self) -> int:
        return self.phis.size

    @property
    def extrema(self):
        return list(zip(self.phis.tolist(), self.ds.tolist()))


@dataclass
class ReconstructedScan:
    """Piecewise-linear scan rebuilt from a neighbor's extrema."""

    samples: np.ndarray
    provenance: str = "interpolated"


def compress(scan: Scan, bank: FilterBank, sender_id: int = 0) -> CompressedObservation:
    """Lowpass the scan and keep only its circular local extrema.

    The filtered scan is snapped to a 1e-9 grid before extremum
    detection; FFT roundoff sits orders of magnitude below that and the
    wire quantum far above it, so snapping cannot move a real extremum
    but stops roundoff ripple from minting spurious ones.  A constant
    filtered scan then has no strict extrema and degenerates to two
    synthetic points at 0 and pi carrying the constant value, which
    keeps reconstruction total.
    """
    cfg = scan.cfg
    if cfg.full_circle:
        y = filter_circular(scan.samples, bank.h2, bank)
    else:
        y = filter_1d(scan.samples, bank.h2, bank)
    q = np.round(np.clip(y, 0.0, 1.0) / _SNAP) * _SNAP
    idx, kinds = kernels.find_extrema(q)
    if idx.size == 0:
        value = float(q[0])
        return CompressedObservation(
            sender_id=sender_id,
            sender_heading=scan.heading,
            phis=np.array([0.0, math.pi]),
            ds=np.array([value, value]),
            kinds=np.array([1, 0], dtype=np.uint8),
        )
    step = cfg.angular_resolution
    return CompressedObservation(
        sender_id=sender_id,
        sender_heading=scan.heading,
        phis=idx.astype(np.float64) * step,
        ds=q[idx],
        kinds=kinds,
    )


def reconstruct(
    obs: CompressedObservation, cfg: SensorConfig, receiver_heading: float
) -> ReconstructedScan:
    """Linear interpolation of the extrema onto the receiver's scan grid.

    Extremum angles are rotated by the heading difference, snapped to the
    nearest sample index, and connected by straight segments with circular
    wrap, so transmitted values land on their indices exactly.
    """
    if obs.count == 0:
        raise ValueError("empty observation cannot be reconstructed")
    m = cfg.m
    step = cfg.angular_resolution
    offset = obs.sender_heading - receiver_heading
    indices = np.round(((obs.phis + offset) % TWO_PI) / step).astype(np.int64) % m
    order = np.argsort(indices, kind="stable")
    seen = {}
    for j in order:
        ij = int(indices[j])
        if ij not in seen:
            seen[ij] = float(obs.ds[j])
    anchor_idx = sorted(seen)
    samples = np.empty(m)
    if len(anchor_idx) == 1:
        samples.fill(seen[anchor_idx[0]])
        return ReconstructedScan(samples)
    for a in range(len(anchor_idx)):
        i0 = anchor_idx[a]
        i1 = anchor_idx[(a + 1) % len(anchor_idx)]
        gap = (i1 - i0) % m
        if gap == 0:
            continue
        d0 = seen[i0]
        d1 = seen[i1]
        for t in range(gap):
            samples[(i0 + t) % m] = d0 + (d1 - d0) * (t / gap)
    return ReconstructedScan(samples)


def encode_wire(obs: CompressedObservation) -> bytes:
    """Pack an observation into the fixed wire format.

    Layout, all little-endian: magic 0xA5 u8, version u8, sender id u16,
    heading in 2*pi/65536 ticks u16, count u8, then per extremum angle
    ticks u16 and distance u16 fixed-point over 65535, then one kind bit
    per extremum (1 = max) packed LSB-first into ceil(count / 8) bytes.
    """
    count = obs.count
    if count > 255:
        raise ValueError(f"too many extrema for the wire format: {count}")
    heading_ticks = int(round((obs.sender_heading % TWO_PI) / _ANGLE_TICK)) % 65536
    out = bytearray(
        _HEADER.pack(_WIRE_MAGIC, _WIRE_VERSION, obs.sender_id & 0xFFFF, heading_ticks, count)
    )
    for j in range(count):
        ticks = int(round((obs.phis[j] % TWO_PI) / _ANGLE_TICK)) % 65536
        dist = int(round(min(max(float(obs.ds[j]), 0.0), 1.0) * 65535.0))
        out += _EXTREMUM.pack(ticks, dist)
    bitmap = bytearray((count + 7) // 8)
    for j in range(count):
        if obs.kinds[j]:
            bitmap[j // 8] |= 1 << (j % 8)
    out += bitmap
    return bytes(out)


def decode_wire(payload: bytes) -> CompressedObservation:
    """Inverse of :func:`encode_wire`.

    Raises
    ------
    ValueError
        On bad magic or trailing bytes (malformed), wrong version, or a
        payload shorter than its header promises (truncated).
    """
    if len(payload) < _HEADER.size:
        raise ValueError("truncated payload: header incomplete")
    magic, version, sender_id, heading_ticks, count = _HEADER.unpack_from(payload)
    if magic != _WIRE_MAGIC:
        raise ValueError(f"malformed header: bad magic 0x{magic:02X}")
    if version != _WIRE_VERSION:
        raise ValueError(f"unsupported wire version {version}")
    expected = _HEADER.size + 4 * count + (count + 7) // 8
    if len(payload) < expected:
        raise ValueError(f"truncated payload: need {expected} bytes, got {len(payload)}")
    if len(payload) > expected:
        raise ValueError(f"malformed payload: {len(payload) - expected} trailing bytes")
    phis = np.empty(count)
    ds = np.empty(count)
    offset = _HEADER.size
    for j in range(count):
        ticks, dist = _EXTREMUM.unpack_from(payload, offset)
        offset += _EXTREMUM.size
        phis[j] = ticks * _ANGLE_TICK
        ds[j] = dist / 65535.0
    kinds = np.zeros(count, dtype=np.uint8)
    for j in range(count):
        kinds[j] = (payload[offset + j // 8] >> (j % 8)) & 1
    return CompressedObservation(
        sender_id=sender_id,
        sender_heading=heading_ticks * _ANGLE_TICK,
        phis=phis,
        ds=ds,
        kinds=kinds,
    )


def wire_length(count: int) -> int:
    """Encoded size in bytes for a given extremum count."""
    return _HEADER.size + 4 * count + (count + 7) // 8
