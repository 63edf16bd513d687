"""Gravity isolation by causal low-pass filtering of raw acceleration.

The filter is a Butterworth low-pass realised as a cascade of second-order
sections. Filtering is causal and single pass so the same code serves
recorded sessions and live streams; the resulting lag is reported as
``delay_s`` (the DC group delay) so callers can re-time the output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal

from .errors import ConfigError, SamplingError
from .ingest import STANDARD_GRAVITY, SensorTrace


@dataclass(frozen=True)
class FilterSpec:
    order: int = 4
    cutoff_hz: float = 1.0
    rate_hz: float = 250.0

    def __post_init__(self):
        if self.order < 2 or self.order % 2:
            raise ConfigError(f"filter order must be even and >= 2, got {self.order}")
        if not self.rate_hz > 0:
            raise ConfigError("sampling rate must be positive")
        if not 0 < self.cutoff_hz < self.rate_hz / 2:
            raise ConfigError(
                f"cutoff {self.cutoff_hz:g} Hz must lie in (0, Nyquist = "
                f"{self.rate_hz / 2:g} Hz)"
            )

    @property
    def nyquist(self) -> float:
        return self.rate_hz / 2


@dataclass(frozen=True)
class GravityTrace:
    """Filtered acceleration; ``g`` has shape (n, 3)."""

    t: np.ndarray
    g: np.ndarray
    delay_s: float = 0.0

    def __len__(self):
        return len(self.t)


def design_lowpass(spec: FilterSpec) -> np.ndarray:
    """Second-order sections, shape (order // 2, 6), with unity DC gain."""
    sos = signal.butter(spec.order, spec.cutoff_hz, btype="low", fs=spec.rate_hz, output="sos")
    # butter() leaves DC gain off 1 by rounding; fold the residue into the first section
    sos[0, :3] /= dc_gain(sos)
    return sos


def frequency_response(sos, freqs_hz, rate_hz) -> np.ndarray:
    """Complex response of the cascade at ``freqs_hz``, evaluated on the unit circle."""
    sos = np.asarray(sos, dtype=float)
    w = 2 * np.pi * np.asarray(freqs_hz, dtype=float) / rate_hz
    zinv = np.exp(-1j * w)
    h = np.ones_like(zinv)
    for b0, b1, b2, a0, a1, a2 in sos:
        h *= (b0 + b1 * zinv + b2 * zinv**2) / (a0 + a1 * zinv + a2 * zinv**2)
    return h


def dc_gain(sos) -> float:
    sos = np.asarray(sos, dtype=float)
    return float(np.prod(sos[:, :3].sum(axis=1) / sos[:, 3:].sum(axis=1)))


def dc_group_delay(sos, rate_hz) -> float:
    """Group delay at 0 Hz in seconds.

    For a polynomial sum(c_k z^-k) the delay at DC is sum(k c_k) / sum(c_k);
    a section contributes numerator delay minus denominator delay.
    """
    k = np.arange(3)
    samples = 0.0
    for row in np.asarray(sos, dtype=float):
        b, a = row[:3], row[3:]
        samples += (k @ b) / b.sum() - (k @ a) / a.sum()
    return float(samples / rate_hz)


def analog_magnitude(freq_hz, spec: FilterSpec):
    """Magnitude of the analog Butterworth prototype, 1/sqrt(1 + (f/fc)^(2n))."""
    ratio = np.asarray(freq_hz, dtype=float) / spec.cutoff_hz
    return 1.0 / np.sqrt(1.0 + ratio ** (2 * spec.order))


class StreamingLowpass:
    """Per-stream filter state for chunked, causal filtering of (n, channels) data.

    The first chunk seeds the state with the steady-state response to its
    first sample, so a static signal passes through without a start-up ramp.
    One instance belongs to one stream.
    """

    def __init__(self, spec: FilterSpec | None = None):
        self.spec = spec or FilterSpec()
        self.sos = design_lowpass(self.spec)
        self._zi_unit = signal.sosfilt_zi(self.sos)
        self._state = None

    @property
    def delay_s(self) -> float:
        return dc_group_delay(self.sos, self.spec.rate_hz)

    def reset(self):
        self._state = None

    def process(self, chunk) -> np.ndarray:
        x = np.asarray(chunk, dtype=float)
        squeeze = x.ndim == 1
        if squeeze:
            x = x[:, None]
        if len(x) == 0:
            return x[:, 0] if squeeze else x
        if self._state is None:
            self._state = self._zi_unit[:, :, None] * x[0][None, None, :]
        y, self._state = signal.sosfilt(self.sos, x, axis=0, zi=self._state)
        return y[:, 0] if squeeze else y


def check_uniform(t, rate_hz, rtol=0.01):
    t = np.asarray(t, dtype=float)
    if len(t) < 2:
        return
    dt = np.diff(t)
    expected = 1.0 / rate_hz
    if np.max(np.abs(dt - expected)) > rtol * expected:
        raise SamplingError(
            f"trace is not uniformly sampled at {rate_hz:g} Hz "
            f"(gaps range {dt.min():.6g}..{dt.max():.6g} s)"
        )


def filter_trace(trace: SensorTrace, spec: FilterSpec | None = None) -> GravityTrace:
    """Low-pass every axis of ``trace`` with the same causal filter."""
    spec = spec or FilterSpec()
    check_uniform(trace.t, spec.rate_hz)
    lp = StreamingLowpass(spec)
    return GravityTrace(trace.t.copy(), lp.process(trace.acc), lp.delay_s)


def signal_magnitude(g) -> np.ndarray | float:
    """Euclidean norm of the gravity vector(s) along the last axis."""
    g = np.asarray(g, dtype=float)
    mag = np.sqrt(np.sum(g * g, axis=-1))
    return float(mag) if mag.ndim == 0 else mag


def is_settled_gravity(g, rtol=0.05) -> np.ndarray | bool:
    """True where the magnitude lies within ``rtol`` of standard gravity."""
    return np.abs(np.asarray(signal_magnitude(g)) / STANDARD_GRAVITY - 1.0) <= rtol
