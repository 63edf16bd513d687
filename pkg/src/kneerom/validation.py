"""Input checks shared by the functional API and the estimators."""

from __future__ import annotations

import numpy as np

from .errors import DataError, DegenerateError

# below this the reading is dominated by free fall and tilt is undefined
MIN_GRAVITY = 1.0


def as_vectors(g, name="g") -> np.ndarray:
    """Return ``g`` as a float array whose last axis has length 3."""
    arr = np.asarray(g, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != 3:
        raise DataError(f"{name} must have a trailing axis of length 3, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{name} contains non-finite values")
    return arr


def check_gravity(g, name="g") -> tuple[np.ndarray, np.ndarray]:
    """Validate gravity vectors and return them with their magnitudes.

    Raises DegenerateError when any vector is shorter than ``MIN_GRAVITY``.
    """
    arr = as_vectors(g, name)
    mag = np.linalg.norm(arr, axis=-1)
    if np.any(mag <= MIN_GRAVITY):
        idx = np.argwhere(np.atleast_1d(mag <= MIN_GRAVITY))[0]
        raise DegenerateError(
            f"{name}: gravity magnitude below {MIN_GRAVITY} m/s^2 (free fall) at "
            f"index {tuple(int(i) for i in idx)}; tilt is undefined"
        )
    return arr, mag


def scalar_or_array(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x
