"""Knee angle from the inverse-tangent elevation of each sensor above the horizontal.

Elevation alone cannot tell which way a sensor leans, so each sensor is also
assigned an X-Z quadrant from the signs of its gravity components. Sensors
leaning the same way are combined by difference, sensors leaning opposite
ways by the supplementary sum.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .validation import as_vectors, check_gravity, scalar_or_array


class Quadrant(enum.IntEnum):
    """Quadrant of (gx, gz): I (-, +), II (+, +), III (+, -), IV (-, -)."""

    I = 1
    II = 2
    III = 3
    IV = 4

    @property
    def x_positive(self) -> bool:
        return self in (Quadrant.II, Quadrant.III)


@dataclass(frozen=True)
class TiltAnglesB:
    """Elevation of each sensor axis above the plane of the other two, in [-90, 90]."""

    theta_x: np.ndarray | float
    theta_y: np.ndarray | float
    theta_z: np.ndarray | float


def tilt_atan(g) -> TiltAnglesB:
    g, _ = check_gravity(g)
    gx, gy, gz = np.moveaxis(g, -1, 0)
    ex = np.degrees(np.arctan2(gx, np.hypot(gy, gz)))
    ey = np.degrees(np.arctan2(gy, np.hypot(gx, gz)))
    ez = np.degrees(np.arctan2(gz, np.hypot(gx, gy)))
    return TiltAnglesB(scalar_or_array(ex), scalar_or_array(ey), scalar_or_array(ez))


def classify_quadrant(g):
    """Quadrant label(s) of gravity vector(s); zero components count as positive.

    Returns a :class:`Quadrant` for a single vector and an int array of
    quadrant values for a batch.
    """
    g = as_vectors(g)
    x_pos = g[..., 0] >= 0
    z_pos = g[..., 2] >= 0
    q = np.where(z_pos, np.where(x_pos, 2, 1), np.where(x_pos, 3, 4))
    return Quadrant(int(q)) if q.ndim == 0 else q


def correct_y_offset_b(t: TiltAnglesB):
    """Roll-corrected elevation: |theta_z| + |theta_y| (90 - |theta_x|) / 90, sign kept."""
    z = np.asarray(t.theta_z, dtype=float)
    term = np.abs(np.asarray(t.theta_y)) * (90.0 - np.abs(np.asarray(t.theta_x))) / 90.0
    sign = np.where(z < 0, -1.0, 1.0)
    return scalar_or_array(sign * (np.abs(z) + term))


def same_side(q_top, q_bottom):
    """True where both quadrants share the sign of the X gravity component."""
    top_pos = np.isin(np.asarray(q_top), (Quadrant.II, Quadrant.III))
    bottom_pos = np.isin(np.asarray(q_bottom), (Quadrant.II, Quadrant.III))
    return top_pos == bottom_pos


def knee_angle_b(top, top_quadrant, bottom, bottom_quadrant):
    """Unsigned bending angle from two signed elevations and their quadrants.

    Same side: |top - bottom|. Opposite sides: |180 - (top + bottom)|.
    Both are the angle between the two sensors' Z directions in the X-Z plane.
    """
    top = np.asarray(top, dtype=float)
    bottom = np.asarray(bottom, dtype=float)
    d = np.where(same_side(top_quadrant, bottom_quadrant), top - bottom, 180.0 - (top + bottom))
    return scalar_or_array(np.abs(d))


def sensor_angle_b(g, correct=True):
    """(elevation, quadrant) for gravity vector(s) ``g``."""
    tilt = tilt_atan(g)
    z = correct_y_offset_b(tilt) if correct else tilt.theta_z
    return z, classify_quadrant(g)


def knee_angles_b(g_thigh, g_shank, correct=True):
    top, q_top = sensor_angle_b(g_thigh, correct)
    bottom, q_bottom = sensor_angle_b(g_shank, correct)
    return knee_angle_b(top, q_top, bottom, q_bottom)
