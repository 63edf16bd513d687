"""Synthetic two-sensor sessions from a rigid uniaxial hinge, with matching video frames.

Sensor frame: X runs along the limb, Y is the hinge (medial-lateral) axis and
Z is the face normal. A segment's pitch is its rotation about Y away from
"face up"; positive pitch drives the X reading negative. Roll is a rotation
about the segment's own X axis (a sensor twisted around the limb). A static
sensor with pitch p and roll r reads g * (-sin p, sin r cos p, cos r cos p).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .ingest import STANDARD_GRAVITY, SensorRole, SensorTrace, trace_from_arrays, write_trace
from .cv_baseline import write_ppm


def specific_force(pitch_deg, roll_deg=0.0, linear_acc=None, g=STANDARD_GRAVITY) -> np.ndarray:
    """Accelerometer reading(s) in the sensor frame.

    ``linear_acc`` is the world-frame (forward, lateral, up) acceleration of
    the sensor, shape (..., 3).
    """
    p = np.radians(np.asarray(pitch_deg, dtype=float))
    r = np.radians(np.asarray(roll_deg, dtype=float))
    p, r = np.broadcast_arrays(p, r)
    f = np.zeros(p.shape + (3,))
    f[..., 2] = g
    if linear_acc is not None:
        f = f + np.asarray(linear_acc, dtype=float)
    fx, fy, fz = np.moveaxis(f, -1, 0)
    # rotate world -> sensor: undo pitch about Y, then roll about X
    bx = np.cos(p) * fx - np.sin(p) * fz
    by = fy
    bz = np.sin(p) * fx + np.cos(p) * fz
    sx = bx
    sy = np.cos(r) * by + np.sin(r) * bz
    sz = -np.sin(r) * by + np.cos(r) * bz
    return np.stack([sx, sy, sz], axis=-1)


@dataclass
class HingeMotion:
    """Segment pitches over time; flexion is shank pitch minus thigh pitch."""

    t: np.ndarray
    thigh_pitch: np.ndarray
    flexion: np.ndarray
    thigh_roll: np.ndarray | float = 0.0
    shank_roll: np.ndarray | float = 0.0

    @property
    def shank_pitch(self) -> np.ndarray:
        return self.thigh_pitch + self.flexion


def hinge_motion(duration=10.0, rate=250.0, peak=135.0, thigh_pitch=-30.0) -> HingeMotion:
    """Shank sweeps 0 -> ``peak`` -> 0 degrees of flexion as a raised cosine.

    The default thigh pitch puts the two sensors on opposite sides of the
    vertical for most of the sweep and takes the shank's Z axis below the
    horizontal near the peak.
    """
    t = np.arange(int(round(duration * rate))) / rate
    flex = 0.5 * peak * (1.0 - np.cos(2 * np.pi * t / duration))
    return HingeMotion(t, np.full_like(t, thigh_pitch), flex)


def walking_motion(duration=10.0, rate=250.0, step_hz=1.0) -> HingeMotion:
    """Upright gait: flexion 5..65 degrees and thigh swing of +-20 degrees at ``step_hz``."""
    t = np.arange(int(round(duration * rate))) / rate
    phase = 2 * np.pi * step_hz * t
    flex = 35.0 - 30.0 * np.cos(phase)
    thigh = 90.0 + 20.0 * np.sin(phase)
    return HingeMotion(t, thigh, flex)


def staircase_motion(levels=(30.0, 60.0, 90.0), dwell=3.0, ramp=0.2, rate=250.0, thigh_pitch=0.0):
    """Flexion held at each level for ``dwell`` seconds with smooth ``ramp``-second moves."""
    if dwell <= 0 or ramp < 0:
        raise ConfigError("dwell must be positive and ramp non-negative")
    knots_t = [0.0]
    knots_a = [levels[0]]
    for i, level in enumerate(levels):
        if i:
            knots_t.append(knots_t[-1] + ramp)
            knots_a.append(level)
        knots_t.append(knots_t[-1] + dwell)
        knots_a.append(level)
    t = np.arange(int(round(knots_t[-1] * rate)) + 1) / rate
    flex = np.empty_like(t)
    for k in range(len(knots_t) - 1):
        t0, t1 = knots_t[k], knots_t[k + 1]
        a0, a1 = knots_a[k], knots_a[k + 1]
        sel = (t >= t0) & (t <= t1)
        u = (t[sel] - t0) / (t1 - t0)
        flex[sel] = a0 + (a1 - a0) * (0.5 - 0.5 * np.cos(np.pi * u))
    return HingeMotion(t, np.full_like(t, thigh_pitch), flex)


def sensor_traces(
    motion: HingeMotion, noise_std=0.0, disturbance_amp=0.0, disturbance_hz=2.0, seed=0
) -> tuple[SensorTrace, SensorTrace]:
    """Thigh and shank accelerometer traces for ``motion``.

    The disturbance is a world-vertical sinusoidal acceleration shared by both
    sensors; noise is white Gaussian, independent per axis and sensor.
    """
    rng = np.random.default_rng(seed)
    n = len(motion.t)
    lin = np.zeros((n, 3))
    lin[:, 2] = disturbance_amp * np.sin(2 * np.pi * disturbance_hz * motion.t)
    traces = []
    for role, pitch, roll in (
        (SensorRole.THIGH, motion.thigh_pitch, motion.thigh_roll),
        (SensorRole.SHANK, motion.shank_pitch, motion.shank_roll),
    ):
        acc = specific_force(pitch, roll, lin)
        if noise_std:
            acc = acc + rng.normal(0.0, noise_std, acc.shape)
        traces.append(trace_from_arrays(role, motion.t, acc))
    return traces[0], traces[1]


def render_frame(
    flexion_deg, thigh_dir_deg=180.0, size=(240, 320), segment=90.0, radius=5.0
) -> np.ndarray:
    """Black frame with red (knee), green (thigh) and blue (calf) discs.

    ``thigh_dir_deg`` is the image direction from knee to thigh marker; the
    calf marker sits at an interior angle of 180 - flexion from it.
    """
    h, w = size
    frame = np.zeros((h, w, 3), dtype=np.uint8)
    knee = np.array([w / 2.0, h / 2.0])
    a = np.radians(thigh_dir_deg)
    b = a + np.radians(180.0 - flexion_deg)
    points = {
        (255, 0, 0): knee,
        (0, 255, 0): knee + segment * np.array([np.cos(a), -np.sin(a)]),
        (0, 0, 255): knee + segment * np.array([np.cos(b), -np.sin(b)]),
    }
    yy, xx = np.mgrid[0:h, 0:w]
    for color, (cx, cy) in points.items():
        frame[(xx - cx) ** 2 + (yy - cy) ** 2 <= radius**2] = color
    return frame


def write_session(
    out_dir,
    motion: HingeMotion,
    fps=10.0,
    noise_std=0.0,
    disturbance_amp=0.0,
    disturbance_hz=2.0,
    seed=0,
    frames=True,
) -> dict:
    """Write thigh.csv, shank.csv, truth.csv and optionally frames/ + manifest.csv."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    thigh, shank = sensor_traces(motion, noise_std, disturbance_amp, disturbance_hz, seed)
    write_trace(out / "thigh.csv", thigh)
    write_trace(out / "shank.csv", shank)
    with open(out / "truth.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t_s,angle_deg\n")
        for t, a in zip(motion.t, motion.flexion):
            fh.write(f"{t:.6f},{a:.6f}\n")
    written = {"thigh": out / "thigh.csv", "shank": out / "shank.csv", "truth": out / "truth.csv"}
    if frames:
        frame_dir = out / "frames"
        frame_dir.mkdir(exist_ok=True)
        rate = 1.0 / float(np.median(np.diff(motion.t)))
        step = max(1, int(round(rate / fps)))
        with open(out / "manifest.csv", "w", encoding="utf-8", newline="\n") as fh:
            fh.write("t_s,path\n")
            for k, i in enumerate(range(0, len(motion.t), step)):
                name = f"frame_{k:05d}.ppm"
                write_ppm(frame_dir / name, render_frame(motion.flexion[i]))
                fh.write(f"{motion.t[i]:.6f},frames/{name}\n")
        written["manifest"] = out / "manifest.csv"
    return written
