"""Knee angle from the inverse-cosine tilt of each sensor against world vertical.

Each sensor's Z axis (normal to its face) is compared with the gravity
direction. The unsigned tilt is given a sign from the X-axis tilt so a
sensor can be tracked through a full turn, a roll about the limb's long
axis is corrected for, and the knee angle is shank tilt minus thigh tilt.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .validation import check_gravity, scalar_or_array


@dataclass(frozen=True)
class TiltAnglesA:
    """Direction angles in degrees, each in [0, 180].

    ``theta_z_signed`` is ``theta_z`` after the X-axis sign rule; it equals
    ``theta_z`` until :func:`apply_x_inversion` runs.
    """

    theta_x: np.ndarray | float
    theta_y: np.ndarray | float
    theta_z: np.ndarray | float
    theta_z_signed: np.ndarray | float

    @classmethod
    def from_angles(cls, theta_x, theta_y, theta_z):
        return cls(theta_x, theta_y, theta_z, theta_z)


def tilt_acos(g) -> TiltAnglesA:
    """Angle of each sensor axis from the gravity direction, acos(component / magnitude).

    Evaluated as atan2(|other two components|, component), which equals the
    inverse cosine but keeps full precision near 0 and 180 degrees.
    """
    g, _ = check_gravity(g)
    gx, gy, gz = np.moveaxis(g, -1, 0)
    ax = np.degrees(np.arctan2(np.hypot(gy, gz), gx))
    ay = np.degrees(np.arctan2(np.hypot(gx, gz), gy))
    az = np.degrees(np.arctan2(np.hypot(gx, gy), gz))
    return TiltAnglesA(
        scalar_or_array(ax), scalar_or_array(ay), scalar_or_array(az), scalar_or_array(az)
    )


def apply_x_inversion(t: TiltAnglesA) -> TiltAnglesA:
    """Negate the Z tilt when the X tilt is below 90 degrees."""
    z = np.asarray(t.theta_z, dtype=float)
    signed = np.where(np.asarray(t.theta_x) < 90.0, -z, z)
    return replace(t, theta_z_signed=scalar_or_array(signed))


def y_offset_term(theta_x, theta_y):
    """Degrees to remove from the unsigned Z tilt for a roll about the long axis.

    The roll shows up as |90 - theta_y|; it is weighted by 1 when the sensor
    lies flat (X tilt of 90) and by 0 when its Z axis is horizontal.
    """
    theta_x = np.asarray(theta_x, dtype=float)
    theta_y = np.asarray(theta_y, dtype=float)
    return np.abs(90.0 - np.abs(theta_y)) * (90.0 - np.abs(90.0 - theta_x)) / 90.0


def correct_y_offset_a(t: TiltAnglesA):
    """Corrected Z tilt in degrees, carrying the sign of ``theta_z_signed``."""
    corrected = np.asarray(t.theta_z, dtype=float) - y_offset_term(t.theta_x, t.theta_y)
    sign = np.where(np.asarray(t.theta_z_signed) < 0, -1.0, 1.0)
    return scalar_or_array(sign * corrected)


def knee_angle_a(top, bottom):
    """Bending angle: shank (bottom) tilt minus thigh (top) tilt."""
    return scalar_or_array(np.asarray(bottom, dtype=float) - np.asarray(top, dtype=float))


def sensor_angle_a(g, correct=True):
    """Signed, optionally roll-corrected Z tilt for gravity vector(s) ``g``."""
    tilt = apply_x_inversion(tilt_acos(g))
    if correct:
        return correct_y_offset_a(tilt)
    return tilt.theta_z_signed


def knee_angles_a(g_thigh, g_shank, correct=True):
    return knee_angle_a(sensor_angle_a(g_thigh, correct), sensor_angle_a(g_shank, correct))
