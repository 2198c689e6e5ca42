"""Robot protective-distance model, quadrant geometry, and angle/index conversions.

Everything downstream (filter sizing, safe-direction extraction, fusion) is
driven by two derived quantities: the planning distance ``l_th = r**2 / r0``
and the safety sector angle ``alpha = pi - 2*arccos(r0 / r)``.  Angles are
radians everywhere inside the library; degrees appear only at CLI and config
boundaries.  Positive angles are counterclockwise (left of heading).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

TWO_PI = 2.0 * math.pi

QUADRANT_I = "I"
QUADRANT_II = "II"
QUADRANT_III = "III"
QUADRANT_IV = "IV"
QUADRANT_NONE = "none"


def wrap_angle(angle):
    """Wrap an angle to the interval (-pi, pi]."""
    a = math.fmod(angle, TWO_PI)
    if a > math.pi:
        a -= TWO_PI
    elif a <= -math.pi:
        a += TWO_PI
    return a


@dataclass(frozen=True)
class ProtectiveModel:
    """Physical robot model plus the two derived planning quantities.

    Attributes
    ----------
    r0 : float
        Lateral collision radius in meters.
    r : float
        Protective radius in meters; the clearance the robot plans with.
    l_th : float
        Planning distance in meters, ``r**2 / r0``.
    alpha : float
        Safety sector angle in radians, ``pi - 2*arccos(r0 / r)``.
    """

    r0: float
    r: float
    l_th: float
    alpha: float


def derive_protective_model(r0: float, r: float) -> ProtectiveModel:
    """Build a :class:`ProtectiveModel` from the two radii.

    Raises
    ------
    ValueError
        If ``r0 <= 0`` or ``r < r0`` (invalid radii).
    """
    if r0 <= 0.0:
        raise ValueError(f"invalid radii: r0 must be positive, got {r0}")
    if r < r0:
        raise ValueError(f"invalid radii: r must be >= r0, got r={r}, r0={r0}")
    l_th = r * r / r0
    alpha = math.pi - 2.0 * math.acos(r0 / r)
    return ProtectiveModel(r0=r0, r=r, l_th=l_th, alpha=alpha)


@dataclass(frozen=True)
class SensorConfig:
    """Range sensor geometry.

    ``theta_fov`` is the field of view in radians, ``m`` the number of
    samples across it, and ``range_max`` the maximum observation distance in
    meters.  ``blind_arc`` is an optional ``(start, end)`` angular interval,
    relative to heading, whose readings are forced to zero; a wrapped
    interval (start > end) covers the rear seam.  The digital sampling
    frequency equals ``m`` samples per FOV.
    """

    theta_fov: float
    m: int
    range_max: float
    blind_arc: tuple[float, float] | None = None

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"sample count must be >= 2, got {self.m}")
        if self.range_max <= 0.0:
            raise ValueError(f"range_max must be positive, got {self.range_max}")
        if not (0.0 < self.theta_fov <= TWO_PI + 1e-12):
            raise ValueError(f"theta_fov must lie in (0, 2*pi], got {self.theta_fov}")

    @property
    def sampling_frequency(self) -> float:
        return float(self.m)

    @property
    def full_circle(self) -> bool:
        return abs(self.theta_fov - TWO_PI) <= 1e-9

    @property
    def angular_resolution(self) -> float:
        return self.theta_fov / self.m


@dataclass(frozen=True)
class CutoffResult:
    """Analog cutoff, digital cutoff, and window width from the sector angle."""

    f0: float
    fc: float
    tc: int


def cutoff_frequency(cfg: SensorConfig, model: ProtectiveModel) -> CutoffResult:
    """Derive the filter cutoff from sensor FOV and safety sector width.

    ``f0 = theta_fov / alpha`` cycles per FOV, ``fc = theta_fov / (m * alpha)``
    cycles per sample, and the matching window width ``tc = ceil(1 / fc)``
    samples.
    """
    if model.alpha <= 0.0:
        raise ValueError("safety sector angle must be positive")
    f0 = cfg.theta_fov / model.alpha
    fc = cfg.theta_fov / (cfg.m * model.alpha)
    tc = math.ceil(1.0 / fc)
    return CutoffResult(f0=f0, fc=fc, tc=tc)


def angle_to_index(angle: float, cfg: SensorConfig) -> int:
    """Map a heading-relative angle to the nearest sample index.

    Sample ``i`` sits at angle ``i * theta_fov / m`` measured
    counterclockwise from heading.  Full-circle sensors wrap; partial-FOV
    sensors reject angles outside ``[0, theta_fov)`` beyond half a sample.

    Raises
    ------
    ValueError
        If the angle falls outside the field of view.
    """
    step = cfg.angular_resolution
    if cfg.full_circle:
        return int(round((angle % TWO_PI) / step)) % cfg.m
    if angle < -0.5 * step or angle > cfg.theta_fov + 0.5 * step:
        raise ValueError(f"angle {angle} outside field of view [0, {cfg.theta_fov}]")
    idx = int(round(angle / step))
    return min(max(idx, 0), cfg.m - 1)


def index_to_angle(index: int, cfg: SensorConfig) -> float:
    """Inverse of :func:`angle_to_index`; returns the sample's angle."""
    if not (0 <= index < cfg.m):
        raise ValueError(f"index {index} out of range [0, {cfg.m})")
    return index * cfg.angular_resolution


def classify_quadrant(angle: float, model: ProtectiveModel) -> str:
    """Assign a heading-relative angle to one of the four planning quadrants.

    Quadrant I is ``(0, alpha/2]`` and IV ``[-alpha/2, 0)``, the left and
    right halves of the safety sector.  II is ``(alpha/2, pi/2]`` and III
    ``[-pi/2, -alpha/2)``, the forward side areas capped at 90 degrees from
    heading.  Anything else, including the heading itself, maps to ``none``.
    """
    half = 0.5 * model.alpha
    if 0.0 < angle <= half:
        return QUADRANT_I
    if half < angle <= 0.5 * math.pi:
        return QUADRANT_II
    if -0.5 * math.pi <= angle < -half:
        return QUADRANT_III
    if -half <= angle < 0.0:
        return QUADRANT_IV
    return QUADRANT_NONE


@dataclass(frozen=True)
class Quadrants:
    """The four angular intervals used when splitting a scan for fusion.

    Intervals are heading-relative ``(lo, hi)`` pairs in radians, open or
    closed per :func:`classify_quadrant`.  Stored to make the boundary
    angles available to area integration without re-deriving them.
    """

    model: ProtectiveModel
    boundaries: dict = field(init=False)

    def __post_init__(self):
        half = 0.5 * self.model.alpha
        object.__setattr__(
            self,
            "boundaries",
            {
                QUADRANT_I: (0.0, half),
                QUADRANT_II: (half, 0.5 * math.pi),
                QUADRANT_III: (-0.5 * math.pi, -half),
                QUADRANT_IV: (-half, 0.0),
            },
        )
