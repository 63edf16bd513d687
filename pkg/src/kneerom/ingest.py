"""Reading accelerometer CSV files and aligning two sensors onto one time grid."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import (
    MalformedRowError,
    MonotonicityError,
    OverlapError,
    SamplingError,
    SensorRangeError,
)

STANDARD_GRAVITY = 9.81
# +-2 g accelerometer
SENSOR_RANGE = 2 * STANDARD_GRAVITY
HEADER = ("t_s", "ax", "ay", "az")
MAX_GAP_S = 0.1
MIN_OVERLAP_S = 1.0
DEFAULT_RATE = 250.0


class SensorRole(str, enum.Enum):
    THIGH = "thigh"
    SHANK = "shank"


class AccelSample(NamedTuple):
    t: float
    ax: float
    ay: float
    az: float


@dataclass(frozen=True)
class SensorTrace:
    """Timestamped triaxial acceleration from one sensor.

    ``t`` has shape (n,) in seconds and ``acc`` shape (n, 3) in m/s^2.
    """

    role: SensorRole
    t: np.ndarray
    acc: np.ndarray
    nominal_rate: float

    def __post_init__(self):
        if len(self.t) < 2:
            raise SamplingError(f"{self.role.value}: a trace needs at least 2 samples")
        if self.acc.shape != (len(self.t), 3):
            raise SamplingError(f"{self.role.value}: acc must have shape (n, 3)")
        if not self.nominal_rate > 0:
            raise SamplingError(f"{self.role.value}: nominal rate must be positive")
        dt = np.diff(self.t)
        if np.any(dt <= 0):
            i = int(np.argmax(dt <= 0)) + 1
            raise MonotonicityError(
                f"{self.role.value}: timestamps must strictly increase (sample {i})"
            )
        median = float(np.median(dt))
        if abs(median * self.nominal_rate - 1.0) > 0.2:
            raise SamplingError(
                f"{self.role.value}: median gap {median:.6g} s is not within 20% "
                f"of 1/{self.nominal_rate:g} s"
            )

    def __len__(self):
        return len(self.t)

    @property
    def samples(self) -> list[AccelSample]:
        return [AccelSample(float(t), *map(float, a)) for t, a in zip(self.t, self.acc)]

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0])


@dataclass(frozen=True)
class Session:
    """Thigh and shank traces resampled onto one shared uniform grid."""

    thigh: SensorTrace
    shank: SensorTrace
    rate: float = DEFAULT_RATE

    @property
    def t(self) -> np.ndarray:
        return self.thigh.t


def _check_range(acc, where):
    bad = np.abs(acc) > SENSOR_RANGE
    if bad.any():
        row = int(np.argmax(bad.any(axis=1)))
        raise SensorRangeError(
            f"{where}: acceleration {acc[row].tolist()} exceeds the "
            f"+-{SENSOR_RANGE:.2f} m/s^2 sensor range (sample {row})"
        )


def trace_from_arrays(role, t, acc, nominal_rate=None) -> SensorTrace:
    """Build a validated trace; the nominal rate defaults to 1 / median gap."""
    t = np.asarray(t, dtype=float)
    acc = np.asarray(acc, dtype=float)
    role = SensorRole(role)
    if len(t) and np.any(t < 0):
        raise MonotonicityError(f"{role.value}: timestamps must be non-negative")
    _check_range(acc.reshape(-1, 3), role.value)
    if nominal_rate is None and len(t) >= 2:
        dt = np.median(np.diff(t))
        nominal_rate = 1.0 / dt if dt > 0 else 0.0
    return SensorTrace(role, t, acc, float(nominal_rate or 0.0))


def parse_trace(path, role, nominal_rate=None) -> SensorTrace:
    """Parse a ``t_s,ax,ay,az`` CSV file into a :class:`SensorTrace`.

    Errors carry the file name and 1-based line number of the offending row.
    """
    path = Path(path)
    role = SensorRole(role)
    with open(path, encoding="utf-8", newline="") as fh:
        lines = fh.read().splitlines()
    if not lines or tuple(c.strip() for c in lines[0].split(",")) != HEADER:
        raise MalformedRowError(path, 1, f"expected header {','.join(HEADER)}")
    rows = []
    prev_t = None
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != 4:
            raise MalformedRowError(path, lineno, f"expected 4 fields, got {len(fields)}")
        try:
            row = [float(f) for f in fields]
        except ValueError:
            raise MalformedRowError(path, lineno, f"non-numeric field in {line!r}") from None
        if not all(np.isfinite(row)):
            raise MalformedRowError(path, lineno, "non-finite value")
        if row[0] < 0:
            raise MonotonicityError(f"{path}:{lineno}: negative timestamp {row[0]}")
        if prev_t is not None and row[0] <= prev_t:
            raise MonotonicityError(
                f"{path}:{lineno}: timestamp {row[0]} does not increase past {prev_t}"
            )
        if max(abs(v) for v in row[1:]) > SENSOR_RANGE:
            raise SensorRangeError(
                f"{path}:{lineno}: acceleration outside the +-{SENSOR_RANGE:.2f} m/s^2 sensor range"
            )
        prev_t = row[0]
        rows.append(row)
    if len(rows) < 2:
        raise MalformedRowError(path, len(lines), "a trace needs at least 2 samples")
    data = np.array(rows)
    return trace_from_arrays(role, data[:, 0], data[:, 1:], nominal_rate)


def write_trace(path, trace: SensorTrace):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(HEADER) + "\n")
        for t, (ax, ay, az) in zip(trace.t, trace.acc):
            fh.write(f"{t:.6f},{ax:.6f},{ay:.6f},{az:.6f}\n")


def overlap_interval(a: SensorTrace, b: SensorTrace) -> tuple[float, float]:
    start = max(a.t[0], b.t[0])
    stop = min(a.t[-1], b.t[-1])
    if stop <= start:
        raise OverlapError("sensor traces do not overlap in time")
    if stop - start < MIN_OVERLAP_S:
        raise OverlapError(
            f"sensor traces overlap for {stop - start:.3f} s, need {MIN_OVERLAP_S:g} s"
        )
    return float(start), float(stop)


def _check_gaps(trace: SensorTrace):
    gaps = np.diff(trace.t)
    if gaps.max() > MAX_GAP_S:
        i = int(np.argmax(gaps))
        raise SamplingError(
            f"{trace.role.value}: dropout of {gaps[i]:.3f} s at t={trace.t[i]:.3f} s "
            f"exceeds {MAX_GAP_S:g} s"
        )


def resample(trace: SensorTrace, grid: np.ndarray) -> SensorTrace:
    acc = np.column_stack([np.interp(grid, trace.t, trace.acc[:, k]) for k in range(3)])
    rate = 1.0 / float(np.median(np.diff(grid)))
    return SensorTrace(trace.role, grid, acc, rate)


def align(thigh: SensorTrace, shank: SensorTrace, rate=DEFAULT_RATE) -> Session:
    """Linearly interpolate both traces onto a uniform grid over their overlap."""
    if not rate > 0:
        raise SamplingError("rate must be positive")
    _check_gaps(thigh)
    _check_gaps(shank)
    start, stop = overlap_interval(thigh, shank)
    n = int(np.floor((stop - start) * rate + 1e-6)) + 1
    grid = start + np.arange(n) / rate
    grid = grid[grid <= stop]
    return Session(resample(thigh, grid), resample(shank, grid), float(rate))
