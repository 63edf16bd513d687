"""End-to-end session processing, baseline comparison and report output."""

from __future__ import annotations

import shutil
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.signal import find_peaks

from .discretize import (
    DiscretizeConfig,
    HoldEvent,
    KneeAngleTrace,
    ThresholdReport,
    discretize,
    threshold_report,
)
from .errors import ConfigError, DataError, MalformedRowError, OverlapError
from .gravity import FilterSpec, design_lowpass, dc_group_delay, filter_trace, frequency_response
from .ingest import MIN_OVERLAP_S, Session, SensorRole, align, parse_trace
from .method_a import knee_angles_a
from .method_b import knee_angles_b

PEAK_PROMINENCE = 20.0
FILTER_INFO_FREQS = (0.1, 1.0, 5.0, 10.0)


@dataclass
class RunConfig:
    method: str = "a"
    filter: FilterSpec = field(default_factory=FilterSpec)
    discretize: DiscretizeConfig = field(default_factory=DiscretizeConfig)
    targets: tuple = (30.0, 60.0, 90.0)
    tolerance: float = 5.0
    ceiling: float | None = None
    floor: float | None = None
    out_dir: Path | None = None
    correct_y_offset: bool = True
    # re-time output by the filter's DC group delay
    compensate_delay: bool = True

    def __post_init__(self):
        self.method = str(self.method).lower()
        if self.method not in ("a", "b"):
            raise ConfigError(f"method must be 'a' or 'b', got {self.method!r}")


@dataclass
class SessionResult:
    trace: KneeAngleTrace
    holds: list[HoldEvent]
    report: ThresholdReport
    delay_s: float


@dataclass
class ComparisonMetrics:
    max_abs_error: float
    per_peak_errors: list[float]
    fraction_peaks_within_5deg: float
    peak_times: list[float] = field(default_factory=list)
    n_samples: int = 0


def knee_angles(g_thigh, g_shank, method="a", correct=True):
    if method == "a":
        return knee_angles_a(g_thigh, g_shank, correct)
    if method == "b":
        return knee_angles_b(g_thigh, g_shank, correct)
    raise ConfigError(f"unknown method {method!r}")


def process_session(session: Session, cfg: RunConfig) -> SessionResult:
    spec = cfg.filter
    if abs(spec.rate_hz - session.rate) > 1e-9:
        spec = FilterSpec(spec.order, spec.cutoff_hz, session.rate)
    gt = filter_trace(session.thigh, spec)
    gs = filter_trace(session.shank, spec)
    angle = knee_angles(gt.g, gs.g, cfg.method, cfg.correct_y_offset)
    delay = gt.delay_s if cfg.compensate_delay else 0.0
    trace = KneeAngleTrace(session.t - delay, np.asarray(angle))
    holds = discretize(trace, cfg.discretize)
    report = threshold_report(holds, trace, cfg.targets, cfg.tolerance, cfg.ceiling, cfg.floor)
    return SessionResult(trace, holds, report, delay)


def write_angle_csv(path, trace: KneeAngleTrace, column="theta_d_deg"):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"t_s,{column}\n")
        for t, a in zip(trace.t, trace.angle):
            fh.write(f"{t:.6f},{a:.6f}\n")


def read_angle_csv(path) -> KneeAngleTrace:
    """Read any two-column ``t_s,<angle>`` CSV."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("t_s,") or lines[0].count(",") != 1:
        raise MalformedRowError(path, 1, "expected a two-column header t_s,<angle>")
    t, a = [], []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        try:
            tv, av = (float(p) for p in parts)
        except ValueError:
            raise MalformedRowError(path, lineno, f"bad row {line!r}") from None
        t.append(tv)
        a.append(av)
    if len(t) < 2:
        raise MalformedRowError(path, len(lines), "need at least 2 rows")
    if np.any(np.diff(t) <= 0):
        raise DataError(f"{path}: timestamps must strictly increase")
    return KneeAngleTrace(np.array(t), np.array(a))


def write_holds_csv(path, holds):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t_s,angle_deg\n")
        for h in holds:
            fh.write(f"{h.t_mean:.6f},{h.angle_mean:.6f}\n")


def write_report_csv(path, report: ThresholdReport):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("target,count\n")
        for target, _, count in report.bins:
            fh.write(f"{target:g},{count}\n")


def write_alerts_csv(path, report: ThresholdReport):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t_s,kind\n")
        for t, kind in report.alerts:
            fh.write(f"{t:.6f},{kind}\n")


def svg_plot(trace: KneeAngleTrace, holds=(), width=800, height=300, max_points=2000) -> str:
    """Minimal SVG line plot of angle against time with hold markers."""
    left, right, top, bottom = 50, 10, 10, 30
    t, a = trace.t, trace.angle
    step = max(1, len(t) // max_points)
    t, a = t[::step], a[::step]
    t0, t1 = float(trace.t[0]), float(trace.t[-1])
    lo = float(min(0.0, np.floor(trace.angle.min() / 30) * 30))
    hi = float(max(30.0, np.ceil(trace.angle.max() / 30) * 30))
    sx = (width - left - right) / max(t1 - t0, 1e-9)
    sy = (height - top - bottom) / (hi - lo)

    def x(v):
        return left + (v - t0) * sx

    def y(v):
        return height - bottom - (v - lo) * sy

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for tick in np.arange(lo, hi + 1e-9, 30):
        out.append(
            f'<line x1="{left}" x2="{width - right}" y1="{y(tick):.1f}" y2="{y(tick):.1f}" '
            'stroke="#ddd"/>'
        )
        out.append(f'<text x="5" y="{y(tick) + 4:.1f}" font-size="10">{tick:g}</text>')
    for tick in np.linspace(t0, t1, 6):
        out.append(
            f'<text x="{x(tick):.1f}" y="{height - 10}" font-size="10" '
            f'text-anchor="middle">{tick:.1f}</text>'
        )
    pts = " ".join(f"{x(tv):.1f},{y(av):.1f}" for tv, av in zip(t, a))
    out.append(f'<polyline fill="none" stroke="steelblue" points="{pts}"/>')
    for h in holds:
        cx, cy = x(h.t_mean), y(h.angle_mean)
        out.append(
            f'<path d="M{cx - 4:.1f},{cy - 4:.1f}L{cx + 4:.1f},{cy + 4:.1f}'
            f'M{cx - 4:.1f},{cy + 4:.1f}L{cx + 4:.1f},{cy - 4:.1f}" stroke="red"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def load_session(thigh_csv, shank_csv, rate) -> Session:
    thigh = parse_trace(thigh_csv, SensorRole.THIGH)
    shank = parse_trace(shank_csv, SensorRole.SHANK)
    return align(thigh, shank, rate)


def run_session(thigh_csv, shank_csv, cfg: RunConfig) -> SessionResult:
    """Process a recorded session and write angle, holds, report, alerts and plot files.

    Outputs are staged in a temporary directory and moved into place only
    after every step succeeded, so a failure leaves no partial files.
    """
    if cfg.out_dir is None:
        raise ConfigError("an output directory is required")
    out = Path(cfg.out_dir)
    session = load_session(thigh_csv, shank_csv, cfg.filter.rate_hz)
    result = process_session(session, cfg)
    out.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory(dir=out, prefix=".staging-") as tmp:
        tmp = Path(tmp)
        write_angle_csv(tmp / "angle.csv", result.trace)
        write_holds_csv(tmp / "holds.csv", result.holds)
        write_report_csv(tmp / "report.csv", result.report)
        write_alerts_csv(tmp / "alerts.csv", result.report)
        (tmp / "angle.svg").write_text(svg_plot(result.trace, result.holds), encoding="utf-8")
        for f in sorted(tmp.iterdir()):
            shutil.move(str(f), out / f.name)
    return result


def compare(trace: KneeAngleTrace, baseline: KneeAngleTrace, baseline_kind="synthetic"):
    """Error of ``trace`` against ``baseline`` over their common time span.

    The baseline is linearly interpolated onto the trace's timestamps. With
    ``baseline_kind="cv"`` the baseline holds marker interior angles and is
    mapped to flexion as 180 - angle first. Peaks are local maxima of the
    baseline with at least 20 degrees of prominence.
    """
    if baseline_kind not in ("cv", "synthetic"):
        raise ConfigError(f"unknown baseline kind {baseline_kind!r}")
    b_angle = 180.0 - baseline.angle if baseline_kind == "cv" else baseline.angle
    start = max(trace.t[0], baseline.t[0])
    stop = min(trace.t[-1], baseline.t[-1])
    if stop <= start:
        raise OverlapError("trace and baseline do not overlap in time")
    if stop - start < MIN_OVERLAP_S:
        raise OverlapError(f"trace and baseline overlap for only {stop - start:.3f} s")
    sel = (trace.t >= start) & (trace.t <= stop)
    t = trace.t[sel]
    ref = np.interp(t, baseline.t, b_angle)
    err = np.abs(trace.angle[sel] - ref)
    peaks, _ = find_peaks(ref, prominence=PEAK_PROMINENCE)
    per_peak = [float(err[i]) for i in peaks]
    frac = float(np.mean(np.array(per_peak) <= 5.0)) if per_peak else 1.0
    return ComparisonMetrics(
        float(err.max()), per_peak, frac, [float(t[i]) for i in peaks], int(len(t))
    )


def filter_info(spec: FilterSpec, freqs=FILTER_INFO_FREQS) -> str:
    sos = design_lowpass(spec)
    lines = [
        f"butterworth low-pass order={spec.order} cutoff={spec.cutoff_hz:g} Hz "
        f"rate={spec.rate_hz:g} Hz",
        f"dc_group_delay_s={dc_group_delay(sos, spec.rate_hz):.6f}",
        "section,b0,b1,b2,a0,a1,a2",
    ]
    for k, row in enumerate(sos):
        lines.append(f"{k}," + ",".join(f"{c:.12e}" for c in row))
    lines.append("freq_hz,magnitude,magnitude_db")
    for f, h in zip(freqs, np.abs(frequency_response(sos, freqs, spec.rate_hz))):
        db = 20 * np.log10(h) if h > 0 else float("-inf")
        lines.append(f"{f:g},{h:.6e},{db:.2f}")
    return "\n".join(lines) + "\n"
