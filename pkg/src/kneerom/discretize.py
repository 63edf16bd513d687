"""Hold detection on a knee-angle trace and threshold counting.

A window slides one sample at a time. While seeking, the first window whose
standard deviation drops below the hold threshold is recorded as a hold
(mean time, mean angle); the detector then waits until a window's standard
deviation exceeds the movement threshold before it seeks again.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError
from .gravity import check_uniform


@dataclass(frozen=True)
class KneeAngleTrace:
    t: np.ndarray
    angle: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "t", np.asarray(self.t, dtype=float))
        object.__setattr__(self, "angle", np.asarray(self.angle, dtype=float))
        if self.t.shape != self.angle.shape or self.t.ndim != 1:
            raise DataError("t and angle must be 1-d arrays of equal length")

    def __len__(self):
        return len(self.t)

    @property
    def rate(self) -> float:
        return 1.0 / float(np.median(np.diff(self.t)))

    def shifted(self, dt) -> "KneeAngleTrace":
        return KneeAngleTrace(self.t + dt, self.angle)

    def reversed(self) -> "KneeAngleTrace":
        """Time-reversed copy on the same time span."""
        return KneeAngleTrace(self.t[0] + self.t[-1] - self.t[::-1], self.angle[::-1].copy())


@dataclass(frozen=True)
class DiscretizeConfig:
    window_s: float = 1.0
    hold_std_deg: float = 1.0
    move_std_deg: float = 4.0

    def __post_init__(self):
        if not self.window_s > 0:
            raise ConfigError("window_s must be positive")
        if not 0 < self.hold_std_deg < self.move_std_deg:
            raise ConfigError("need 0 < hold_std_deg < move_std_deg")


@dataclass(frozen=True)
class HoldEvent:
    t_mean: float
    angle_mean: float
    start: int = field(default=0, compare=False)
    stop: int = field(default=0, compare=False)


@dataclass
class ThresholdReport:
    bins: list[tuple[float, float, int]]
    alerts: list[tuple[float, str]]
    unbinned: int = 0

    @property
    def counts(self) -> list[int]:
        return [c for _, _, c in self.bins]


def window_length(trace: KneeAngleTrace, cfg: DiscretizeConfig) -> int:
    return int(round(cfg.window_s * trace.rate))


def rolling_std(x, n) -> np.ndarray:
    """Population standard deviation of every length-``n`` window of ``x``."""
    x = np.asarray(x, dtype=float)
    # centre first so the running sums stay well conditioned
    x = x - x.mean()
    c1 = np.concatenate(([0.0], np.cumsum(x)))
    c2 = np.concatenate(([0.0], np.cumsum(x * x)))
    s1 = c1[n:] - c1[:-n]
    s2 = c2[n:] - c2[:-n]
    var = np.maximum(s2 / n - (s1 / n) ** 2, 0.0)
    return np.sqrt(var)


def discretize(trace: KneeAngleTrace, cfg: DiscretizeConfig | None = None) -> list[HoldEvent]:
    cfg = cfg or DiscretizeConfig()
    if len(trace) < 2:
        raise DataError("trace needs at least 2 samples")
    check_uniform(trace.t, trace.rate)
    n = window_length(trace, cfg)
    if n < 2:
        raise DataError(f"window of {cfg.window_s:g} s holds fewer than 2 samples")
    if n > len(trace):
        raise DataError(
            f"window of {n} samples is longer than the trace ({len(trace)} samples)"
        )
    std = rolling_std(trace.angle, n)
    holds = []
    i = 0
    m = len(std)
    while i < m:
        quiet = np.flatnonzero(std[i:] < cfg.hold_std_deg)
        if not len(quiet):
            break
        start = i + int(quiet[0])
        sl = slice(start, start + n)
        holds.append(
            HoldEvent(
                float(trace.t[sl].mean()), float(trace.angle[sl].mean()), start, start + n
            )
        )
        moving = np.flatnonzero(std[start:] > cfg.move_std_deg)
        if not len(moving):
            break
        i = start + int(moving[0])
    return holds


def upward_crossings(angle, level) -> np.ndarray:
    """Indices where ``angle`` goes from below ``level`` to at or above it."""
    a = np.asarray(angle, dtype=float)
    return np.flatnonzero((a[:-1] < level) & (a[1:] >= level)) + 1


def downward_crossings(angle, level) -> np.ndarray:
    a = np.asarray(angle, dtype=float)
    return np.flatnonzero((a[:-1] > level) & (a[1:] <= level)) + 1


def threshold_report(
    holds, trace: KneeAngleTrace, targets=(30.0, 60.0, 90.0), tol=5.0, ceiling=None, floor=None
) -> ThresholdReport:
    """Count holds per target angle and list ceiling/floor crossings of the raw trace.

    Each hold goes to its nearest target when that target is within ``tol``.
    """
    if not tol > 0:
        raise ConfigError("tolerance must be positive")
    targets = [float(x) for x in targets]
    counts = [0] * len(targets)
    unbinned = 0
    for h in holds:
        if not targets:
            unbinned += 1
            continue
        dist = [abs(h.angle_mean - x) for x in targets]
        k = int(np.argmin(dist))
        if dist[k] <= tol:
            counts[k] += 1
        else:
            unbinned += 1
    alerts = []
    if ceiling is not None:
        alerts += [(float(trace.t[i]), "ceiling") for i in upward_crossings(trace.angle, ceiling)]
    if floor is not None:
        alerts += [(float(trace.t[i]), "floor") for i in downward_crossings(trace.angle, floor)]
    alerts.sort()
    bins = [(x, float(tol), c) for x, c in zip(targets, counts)]
    return ThresholdReport(bins, alerts, unbinned)
