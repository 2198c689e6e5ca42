"""Filter construction, FFT sizing, and frequency-domain filtering.

Two filters drive the pipeline: ``h1``, a rectangular averaging window whose
width matches the safety sector, used to test the safe-direction condition;
and ``h2``, a Blackman-windowed sinc lowpass used to smooth scans before
extrema compression.  Both are linear-phase FIR filters applied by
multiplication in the frequency domain at a shared FFT size ``n0``, followed
by group-delay compensation.
"""

from __future__ import annotations

import math
import struct

import numpy as np

from .geometry import SensorConfig, ProtectiveModel, cutoff_frequency

KIND_H1 = "h1"
KIND_H2 = "h2"

_BANK_MAGIC = b"FBNK"
_BANK_VERSION = 1


class FilterSpec:
    """One FIR filter: its taps plus the metadata the pipeline needs.

    Attributes
    ----------
    kind : str
        ``"h1"`` (safe-window) or ``"h2"`` (lowpass).
    n : int
        Tap count, always odd so the group delay is an integer.
    tau : int
        Group delay in samples, ``(n - 1) // 2``.
    tc : int or None
        Rectangular window width in samples (h1 only).
    fc : float or None
        Digital cutoff in cycles per sample (h2 only).
    taps : ndarray
        Time-domain coefficients, sum exactly 1.
    """

    def __init__(self, kind, n, taps, tc=None, fc=None):
        if n % 2 == 0:
            raise ValueError(f"tap count must be odd, got {n}")
        self.kind = kind
        self.n = int(n)
        self.tau = (self.n - 1) // 2
        self.tc = tc
        self.fc = fc
        self.taps = np.asarray(taps, dtype=np.float64)
        if self.taps.shape != (self.n,):
            raise ValueError("taps length does not match n")


def _force_odd(n: int) -> int:
    return n if n % 2 == 1 else n + 1


def choose_fft_size(m: int, n1: int, n2: int) -> int:
    """Smallest power of two avoiding front-to-end aliasing.

    The size must exceed twice the longest sequence and also exceed every
    linear-convolution output length ``m + n - 1``.
    """
    if min(m, n1, n2) < 1:
        raise ValueError("sequence lengths must be >= 1")
    need = max(2 * max(m, n1, n2), m + n1 - 1, m + n2 - 1)
    n0 = 1
    while n0 <= need:
        n0 *= 2
    return n0


def build_h1(m: int, tc: int) -> FilterSpec:
    """Rectangular safe-window filter.

    ``n1`` is ``m`` rounded up to odd; the window of width ``tc`` (also
    rounded up to odd) sits centered at the group delay with value
    ``1 / tc``, so the taps sum to exactly 1.

    Raises
    ------
    ValueError
        If ``tc < 1`` or the window does not fit inside ``n1`` taps.
    """
    if tc < 1:
        raise ValueError(f"window width must be >= 1, got {tc}")
    n1 = _force_odd(m)
    tc = _force_odd(int(tc))
    if tc > n1:
        raise ValueError(f"window width {tc} exceeds tap count {n1}")
    tau = (n1 - 1) // 2
    half = (tc - 1) // 2
    taps = np.zeros(n1)
    taps[tau - half : tau + half + 1] = 1.0 / tc
    return FilterSpec(KIND_H1, n1, taps, tc=tc)


def build_h2(n2: int, fc: float) -> FilterSpec:
    """Blackman-windowed sinc lowpass with unit DC gain.

    The ideal response ``2*fc*sinc(2*fc*(n - tau))`` is truncated by a
    Blackman window and then rescaled so the taps sum to exactly 1 (the raw
    windowed sinc only sums approximately to 1).

    Raises
    ------
    ValueError
        If ``fc`` is outside ``(0, 0.5)`` or ``n2`` is even.
    """
    if not (0.0 < fc < 0.5):
        raise ValueError(f"invalid cutoff {fc}, need 0 < fc < 0.5")
    if n2 % 2 == 0:
        raise ValueError(f"tap count must be odd, got {n2}")
    tau = (n2 - 1) / 2.0
    n = np.arange(n2)
    window = (
        0.42
        - 0.5 * np.cos(2.0 * np.pi * n / (n2 - 1))
        + 0.08 * np.cos(4.0 * np.pi * n / (n2 - 1))
    )
    taps = 2.0 * fc * np.sinc(2.0 * fc * (n - tau)) * window
    taps /= taps.sum()
    return FilterSpec(KIND_H2, n2, taps, fc=fc)


def fft_forward(x, n0: int):
    """Zero-padded forward DFT at size ``n0`` (power of two)."""
    _check_fft_size(n0, len(x))
    return np.fft.fft(np.asarray(x, dtype=np.float64), n0)


def fft_inverse(spectrum, n0: int):
    """Inverse DFT at size ``n0``; returns the complex sequence."""
    _check_fft_size(n0, len(spectrum))
    return np.fft.ifft(np.asarray(spectrum, dtype=np.complex128), n0)


def _check_fft_size(n0, length):
    if n0 < 1 or (n0 & (n0 - 1)) != 0:
        raise ValueError(f"bad FFT size {n0}, need a power of two")
    if length > n0:
        raise ValueError(f"sequence length {length} exceeds FFT size {n0}")


class FilterBank:
    """Pre-built filters plus their shared-size spectra.

    Built once per sensor/model pairing and shared read-only afterwards.
    ``h1_freq`` and ``h2_freq`` are the full ``n0``-point spectra; the
    half-spectra used by the realtime path are cached privately.
    """

    def __init__(self, m: int, h1: FilterSpec, h2: FilterSpec):
        self.m = int(m)
        self.h1 = h1
        self.h2 = h2
        self.n0 = choose_fft_size(self.m, h1.n, h2.n)
        self.h1_time = h1.taps
        self.h2_time = h2.taps
        self.h1_freq = np.fft.fft(h1.taps, self.n0)
        self.h2_freq = np.fft.fft(h2.taps, self.n0)
        self._h1_rfft = np.fft.rfft(h1.taps, self.n0)
        self._h2_rfft = np.fft.rfft(h2.taps, self.n0)

    def spec_for(self, kind: str) -> FilterSpec:
        if kind == KIND_H1:
            return self.h1
        if kind == KIND_H2:
            return self.h2
        raise ValueError(f"unknown filter kind {kind!r}")


def make_filter_bank(cfg: SensorConfig, model: ProtectiveModel) -> FilterBank:
    """Build the bank for one sensor/model pairing.

    Both filters get ``m`` rounded up to odd taps; h1's window width and
    h2's cutoff come from :func:`fftnav.geometry.cutoff_frequency`.
    """
    cut = cutoff_frequency(cfg, model)
    n = _force_odd(cfg.m)
    h1 = build_h1(cfg.m, cut.tc)
    h2 = build_h2(n, cut.fc)
    return FilterBank(cfg.m, h1, h2)


def filter_1d(samples, spec: FilterSpec, bank: FilterBank):
    """Linear-convolution filtering via the bank's FFT size.

    Multiplies the zero-padded input spectrum by the filter spectrum,
    inverts, shifts left by the group delay, and returns the principal
    value sequence of length ``m``.  Samples near the edges carry partial
    window sums; callers restrict to the valid index range.

    Raises
    ------
    ValueError
        If the input length does not match the bank.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.shape != (bank.m,):
        raise ValueError(f"bank mismatch: expected length {bank.m}, got {x.shape}")
    h_rfft = bank._h1_rfft if spec.kind == KIND_H1 else bank._h2_rfft
    full = np.fft.irfft(np.fft.rfft(x, bank.n0) * h_rfft, bank.n0)
    return full[spec.tau : spec.tau + bank.m].copy()


def filter_circular(samples, spec: FilterSpec, bank: FilterBank):
    """Exact circular filtering for full-circle scans.

    Folds the zero-padded linear convolution with period ``m`` and rolls by
    the group delay, which equals convolving with the filter wrapped onto
    the circle.  Every output index is valid.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.shape != (bank.m,):
        raise ValueError(f"bank mismatch: expected length {bank.m}, got {x.shape}")
    h_rfft = bank._h1_rfft if spec.kind == KIND_H1 else bank._h2_rfft
    full = np.fft.irfft(np.fft.rfft(x, bank.n0) * h_rfft, bank.n0)
    length = bank.m + spec.n - 1
    folded = np.zeros(bank.m)
    for start in range(0, length, bank.m):
        chunk = full[start : min(start + bank.m, length)]
        folded[: chunk.size] += chunk
    return np.roll(folded, -(spec.tau % bank.m))


def filter_2d(grid, spec: FilterSpec, col_spec: FilterSpec | None = None):
    """Separable 2D filtering: the 1D pipeline along rows, then columns.

    Each axis gets its own tap vector rebuilt at that axis's length (odd
    forced) from the spec's parameters; ``col_spec`` overrides the column
    pass when the two axes differ.

    Raises
    ------
    ValueError
        If the grid is smaller than the filter footprint on either axis.
    """
    g = np.asarray(grid, dtype=np.float64)
    if g.ndim != 2:
        raise ValueError(f"expected a 2D grid, got shape {g.shape}")
    rows, cols = g.shape
    cspec = col_spec if col_spec is not None else spec
    out = np.empty_like(g)
    row_spec, row_bank = _axis_pipeline(cols, spec)
    for i in range(rows):
        out[i, :] = filter_1d(g[i, :], row_spec, row_bank)
    col_pipeline, col_bank = _axis_pipeline(rows, cspec)
    for j in range(cols):
        out[:, j] = filter_1d(out[:, j], col_pipeline, col_bank)
    return out


def _axis_pipeline(length, spec):
    if spec.kind == KIND_H1:
        if spec.tc > _force_odd(length):
            raise ValueError(
                f"filter footprint {spec.tc} exceeds axis length {length}"
            )
        axis_spec = build_h1(length, spec.tc)
    else:
        n = _force_odd(length)
        axis_spec = build_h2(n, spec.fc)
    bank = FilterBank(length, axis_spec, axis_spec)
    return axis_spec, bank


def save_bank(bank: FilterBank) -> bytes:
    """Serialize a bank to a self-describing binary blob.

    Layout: magic ``FBNK``, version u8, m u32, n0 u32, then per filter the
    tap count u32, window width u32 (0 when absent), cutoff f64 (0 when
    absent), and the taps as little-endian f64.  Spectra are rebuilt on
    load.
    """
    parts = [_BANK_MAGIC, struct.pack("<BII", _BANK_VERSION, bank.m, bank.n0)]
    for spec in (bank.h1, bank.h2):
        parts.append(
            struct.pack("<IId", spec.n, spec.tc or 0, spec.fc or 0.0)
        )
        parts.append(spec.taps.astype("<f8").tobytes())
    return b"".join(parts)


def load_bank(blob: bytes) -> FilterBank:
    """Inverse of :func:`save_bank`.

    Raises
    ------
    ValueError
        On bad magic, unsupported version, or truncated payload.
    """
    if len(blob) < 4 or blob[:4] != _BANK_MAGIC:
        raise ValueError("not a filter bank blob (bad magic)")
    if len(blob) < 13:
        raise ValueError("truncated filter bank blob")
    version, m, n0 = struct.unpack_from("<BII", blob, 4)
    if version != _BANK_VERSION:
        raise ValueError(f"unsupported filter bank version {version}")
    offset = 13
    specs = []
    for kind in (KIND_H1, KIND_H2):
        if len(blob) < offset + 16:
            raise ValueError("truncated filter bank blob")
        n, tc, fc = struct.unpack_from("<IId", blob, offset)
        offset += 16
        end = offset + 8 * n
        if len(blob) < end:
            raise ValueError("truncated filter bank blob")
        taps = np.frombuffer(blob[offset:end], dtype="<f8").copy()
        offset = end
        if kind == KIND_H1:
            specs.append(FilterSpec(kind, n, taps, tc=tc))
        else:
            specs.append(FilterSpec(kind, n, taps, fc=fc))
    bank = FilterBank(m, specs[0], specs[1])
    if bank.n0 != n0:
        raise ValueError(f"inconsistent FFT size in blob: {n0} vs {bank.n0}")
    return bank
