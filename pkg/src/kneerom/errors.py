"""Exception hierarchy shared by the library and the command line tool."""


class RomError(Exception):
    """Base class for every error raised by kneerom."""

    exit_code = 2


class ConfigError(RomError, ValueError):
    """Invalid parameters (filter spec, thresholds, CLI values)."""

    exit_code = 1


class DataError(RomError, ValueError):
    """Input data that cannot be processed as given."""

    exit_code = 2


class MalformedRowError(DataError):
    def __init__(self, path, line, reason):
        self.path = str(path)
        self.line = line
        super().__init__(f"{path}:{line}: {reason}")


class MonotonicityError(DataError):
    pass


class SensorRangeError(DataError):
    pass


class SamplingError(DataError):
    """Non-uniform sampling, dropouts, or a rate mismatch."""


class OverlapError(DataError):
    pass


class FrameError(DataError):
    """Unreadable or malformed raster frame."""


class MissingMarkerError(DataError):
    pass


class DegenerateError(RomError, ArithmeticError):
    """Geometry or signal for which the requested angle is undefined."""

    exit_code = 3
