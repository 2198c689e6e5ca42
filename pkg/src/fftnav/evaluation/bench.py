"""Latency micro-benchmarks for the scan pipeline and the kernels.

Timing uses perf_counter around single calls; inputs are synthetic
smooth scans so run-to-run numbers are comparable.  The kernel benchmark
exercises every importable backend on identical inputs.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..filters import make_filter_bank
from ..geometry import SensorConfig, derive_protective_model
from ..perception import compress, extract_safe_directions


@dataclass(frozen=True)
class BenchStats:
    n: int
    median_us: float
    mean_us: float
    p99_us: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "median_us": self.median_us,
            "mean_us": self.mean_us,
            "p99_us": self.p99_us,
        }


_EMPTY = BenchStats(n=0, median_us=math.nan, mean_us=math.nan, p99_us=math.nan)


def _stats(samples_us) -> BenchStats:
    if not len(samples_us):
        return _EMPTY
    arr = np.asarray(samples_us, dtype=np.float64)
    return BenchStats(
        n=int(arr.size),
        median_us=float(np.median(arr)),
        mean_us=float(arr.mean()),
        p99_us=float(np.percentile(arr, 99.0)),
    )


def synthetic_scans(m: int, count: int, seed: int = 0) -> np.ndarray:
    """Smooth normalized scans: filtered noise with obstacle-like dips."""
    rng = np.random.default_rng(seed)
    raw = rng.uniform(0.2, 1.0, size=(max(count, 1), m))
    kernel = np.ones(9) / 9.0
    smooth = np.empty_like(raw)
    for i in range(raw.shape[0]):
        smooth[i] = np.convolve(np.concatenate([raw[i], raw[i][:8]]), kernel, mode="valid")[:m]
    return np.clip(smooth, 0.0, 1.0)


def bench_filtering(m: int = 360, iterations: int = 200, seed: int = 0) -> BenchStats:
    """Wall time of extract_safe_directions + compress per synthetic scan."""
    if iterations <= 0:
        return _EMPTY
    cfg = SensorConfig(theta_fov=2.0 * math.pi, m=m, range_max=3.0)
    model = derive_protective_model(0.15, 0.3)
    bank = make_filter_bank(cfg, model)
    scans = synthetic_scans(m, iterations, seed)
    from ..perception import Scan

    for i in range(min(10, iterations)):
        scan = Scan(samples=scans[i], cfg=cfg, heading=0.0)
        extract_safe_directions(scan, model, bank)
        compress(scan, bank, sender_id=0)
    samples = []
    for i in range(iterations):
        scan = Scan(samples=scans[i], cfg=cfg, heading=0.0)
        t0 = time.perf_counter()
        extract_safe_directions(scan, model, bank)
        compress(scan, bank, sender_id=0)
        samples.append((time.perf_counter() - t0) * 1e6)
    return _stats(samples)


def bench_kernels(iterations: int = 50, seed: int = 0) -> dict:
    """Per-backend timings for the raycast and A* kernels.

    Returns {kernel: {backend: BenchStats}} for every backend that
    imports; inputs are identical across backends.
    """
    rng = np.random.default_rng(seed)
    m = 360
    ang = np.arange(m) * (2.0 * math.pi / m)
    ux = np.cos(ang)
    uy = np.sin(ang)
    k = 90
    cx = rng.uniform(1.0, 19.0, k)
    cy = rng.uniform(1.0, 19.0, k)
    cr = rng.uniform(0.1, 0.6, k)
    blocked = rng.random((200, 200)) < 0.12
    blocked[0:2, :] = False
    blocked[-2:, :] = False
    result: dict = {"raycast": {}, "astar": {}}
    for name in kernels.available_backends():
        mod = kernels.get_backend(name)
        for _ in range(3):
            mod.raycast(10.0, 10.0, ux, uy, cx, cy, cr, 0.0, 0.0, 20.0, 20.0, 3.0)
            mod.astar(blocked, 0, 100, 199, 100)
        times_ray = []
        times_astar = []
        for _ in range(max(iterations, 0)):
            t0 = time.perf_counter()
            mod.raycast(10.0, 10.0, ux, uy, cx, cy, cr, 0.0, 0.0, 20.0, 20.0, 3.0)
            times_ray.append((time.perf_counter() - t0) * 1e6)
            t0 = time.perf_counter()
            mod.astar(blocked, 0, 100, 199, 100)
            times_astar.append((time.perf_counter() - t0) * 1e6)
        result["raycast"][name] = _stats(times_ray)
        result["astar"][name] = _stats(times_astar)
    return result
