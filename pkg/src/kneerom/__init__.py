"""Knee range of motion from a thigh and a shank accelerometer."""

from .cv_baseline import ColorRange, DotDetection, FrameAngle, detect_dot, extract_trace, frame_angle
from .discretize import (
    DiscretizeConfig,
    HoldEvent,
    KneeAngleTrace,
    ThresholdReport,
    discretize,
    threshold_report,
)
from .errors import (
    ConfigError,
    DataError,
    DegenerateError,
    MissingMarkerError,
    MonotonicityError,
    OverlapError,
    RomError,
    SensorRangeError,
)
from .gravity import FilterSpec, GravityTrace, design_lowpass, filter_trace, signal_magnitude
from .ingest import AccelSample, Session, SensorRole, SensorTrace, align, parse_trace
from .method_a import (
    TiltAnglesA,
    apply_x_inversion,
    correct_y_offset_a,
    knee_angle_a,
    knee_angles_a,
    tilt_acos,
)
from .method_b import (
    Quadrant,
    TiltAnglesB,
    classify_quadrant,
    correct_y_offset_b,
    knee_angle_b,
    knee_angles_b,
    tilt_atan,
)
from .pipeline import ComparisonMetrics, RunConfig, compare, filter_info, run_session

__version__ = "0.1.0"

_ESTIMATORS = ("GravityFilter", "HoldDiscretizer", "KneeAngleEstimator")


def __getattr__(name):
    # keep scikit-learn off the import path of the CLI
    if name in _ESTIMATORS:
        from . import estimators

        return getattr(estimators, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
