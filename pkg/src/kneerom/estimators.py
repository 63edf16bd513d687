"""scikit-learn compatible wrappers so the pipeline composes with ``sklearn.pipeline``.

Column layouts:
    GravityFilter        any (n_samples, n_channels) array sampled at ``rate_hz``
    KneeAngleEstimator   (n_samples, 6): thigh gx, gy, gz, shank gx, gy, gz
    HoldDiscretizer      (n_samples, 2): t_s, angle_deg
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, validate_data

from .discretize import DiscretizeConfig, KneeAngleTrace, discretize
from .errors import ConfigError
from .gravity import FilterSpec, StreamingLowpass
from .pipeline import knee_angles


class GravityFilter(TransformerMixin, BaseEstimator):
    """Causal Butterworth low-pass applied to every column independently.

    Each ``transform`` call is treated as a fresh stream starting at rest on
    its first row.
    """

    def __init__(self, order=4, cutoff_hz=1.0, rate_hz=250.0):
        self.order = order
        self.cutoff_hz = cutoff_hz
        self.rate_hz = rate_hz

    def fit(self, X, y=None):
        validate_data(self, X, ensure_min_samples=1)
        lp = StreamingLowpass(FilterSpec(self.order, self.cutoff_hz, self.rate_hz))
        self.sos_ = lp.sos
        self.delay_s_ = lp.delay_s
        return self

    def transform(self, X):
        check_is_fitted(self, "sos_")
        X = validate_data(self, X, reset=False)
        lp = StreamingLowpass(FilterSpec(self.order, self.cutoff_hz, self.rate_hz))
        return lp.process(X)


class KneeAngleEstimator(TransformerMixin, BaseEstimator):
    """Knee bending angle from paired thigh/shank gravity vectors."""

    def __init__(self, method="a", correct_y_offset=True):
        self.method = method
        self.correct_y_offset = correct_y_offset

    def fit(self, X, y=None):
        if self.method not in ("a", "b"):
            raise ConfigError(f"method must be 'a' or 'b', got {self.method!r}")
        X = validate_data(self, X)
        if X.shape[1] != 6:
            raise ValueError(f"expected 6 columns (thigh xyz, shank xyz), got {X.shape[1]}")
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = validate_data(self, X, reset=False)
        return np.asarray(
            knee_angles(X[:, :3], X[:, 3:], self.method, self.correct_y_offset)
        ).reshape(-1, 1)


class HoldDiscretizer(TransformerMixin, BaseEstimator):
    """Hold events as an (n_holds, 2) array of mean time and mean angle."""

    def __init__(self, window_s=1.0, hold_std_deg=1.0, move_std_deg=4.0):
        self.window_s = window_s
        self.hold_std_deg = hold_std_deg
        self.move_std_deg = move_std_deg

    def fit(self, X=None, y=None):
        self.config_ = DiscretizeConfig(self.window_s, self.hold_std_deg, self.move_std_deg)
        return self

    def transform(self, X):
        check_is_fitted(self, "config_")
        X = check_array(X, ensure_min_samples=2)
        if X.shape[1] != 2:
            raise ValueError("expected columns (t_s, angle_deg)")
        holds = discretize(KneeAngleTrace(X[:, 0], X[:, 1]), self.config_)
        return np.array([[h.t_mean, h.angle_mean] for h in holds]).reshape(-1, 2)
