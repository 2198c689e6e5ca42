"""Arrival-rate and path-quality metrics for episode batches."""

from __future__ import annotations

import math
from dataclasses import dataclass


class LengthMismatchError(ValueError):
    """Robot summaries and optimal lengths do not line up."""


@dataclass(frozen=True)
class RobotRow:
    success: bool
    path_len: float
    optimal_len: float


@dataclass(frozen=True)
class MetricsReport:
    """AR and SPL are percentages; APL is meters over successful robots."""

    ar: float
    apl: float
    spl: float
    rows: tuple

    def to_dict(self) -> dict:
        return {
            "AR_pct": self.ar,
            "APL_m": self.apl,
            "SPL_pct": self.spl,
            "robots": len(self.rows),
        }


def compute_metrics(summaries, optimal_lengths) -> MetricsReport:
    """Aggregate per-robot outcomes against the oracle lengths.

    AR is the success fraction, APL the mean executed length over
    successes, and SPL the success-weighted ratio of optimal to executed
    length, each robot's ratio capped at 1.
    """
    lengths = [float(v) for v in optimal_lengths]
    items = list(summaries)
    if len(items) != len(lengths):
        raise LengthMismatchError(
            f"{len(items)} robot summaries but {len(lengths)} optimal lengths"
        )
    if not items:
        raise LengthMismatchError("empty batch")
    rows = []
    spl_sum = 0.0
    path_sum = 0.0
    n_success = 0
    for s, l in zip(items, lengths):
        rows.append(RobotRow(success=bool(s.success), path_len=float(s.path_len), optimal_len=l))
        if s.success:
            n_success += 1
            path_sum += s.path_len
            spl_sum += l / max(s.path_len, l)
    n = len(items)
    return MetricsReport(
        ar=100.0 * n_success / n,
        apl=path_sum / n_success if n_success else math.nan,
        spl=100.0 * spl_sum / n,
        rows=tuple(rows),
    )
