"""Ground-truth knee angle from video frames carrying three coloured markers.

Red sits on the knee, green on the thigh and blue on the calf. Each marker's
centroid is the mean position of every pixel inside its RGB box (no
connected-component separation), and the frame angle is the angle between
the red->green and red->blue rays. A straight leg reads 180 degrees.
"""

from __future__ import annotations

import csv
import enum
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError, DegenerateError, FrameError, MissingMarkerError

MIN_PIXELS = 10


class MarkerRole(str, enum.Enum):
    RED = "red"  # knee
    GREEN = "green"  # thigh
    BLUE = "blue"  # calf


@dataclass(frozen=True)
class ColorRange:
    min_rgb: tuple[int, int, int]
    max_rgb: tuple[int, int, int]

    def __post_init__(self):
        for lo, hi in zip(self.min_rgb, self.max_rgb):
            if not 0 <= lo <= hi <= 255:
                raise DataError(f"invalid colour range {self.min_rgb}..{self.max_rgb}")

    def mask(self, frame) -> np.ndarray:
        lo = np.array(self.min_rgb, dtype=np.uint8)
        hi = np.array(self.max_rgb, dtype=np.uint8)
        return np.all((frame >= lo) & (frame <= hi), axis=-1)


DEFAULT_RANGES = {
    MarkerRole.RED: ColorRange((150, 0, 0), (255, 100, 100)),
    MarkerRole.GREEN: ColorRange((0, 150, 0), (100, 255, 100)),
    MarkerRole.BLUE: ColorRange((0, 0, 150), (100, 100, 255)),
}


@dataclass(frozen=True)
class DotDetection:
    role: MarkerRole | None
    centroid: tuple[float, float]
    pixel_count: int


@dataclass(frozen=True)
class FrameAngle:
    t: float
    angle: float


@dataclass(frozen=True)
class FrameFailure:
    t: float
    path: str
    reason: str


# header tokens may be separated by whitespace and interleaved with comments
_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def read_ppm(path) -> np.ndarray:
    """Read a binary (P6, maxval 255) PPM file into an (h, w, 3) uint8 array."""
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise FrameError(f"{path}: cannot read frame ({exc.strerror})") from None
    return decode_ppm(data, str(path))


def decode_ppm(data: bytes, name="<bytes>") -> np.ndarray:
    pos = 0
    tokens = []
    for _ in range(4):
        m = _TOKEN.match(data, pos)
        if not m:
            raise FrameError(f"{name}: truncated PPM header")
        tokens.append(m.group(1))
        pos = m.end()
    if tokens[0] != b"P6":
        raise FrameError(f"{name}: not a binary PPM (magic {tokens[0][:8]!r})")
    try:
        width, height, maxval = (int(tok) for tok in tokens[1:])
    except ValueError:
        raise FrameError(f"{name}: malformed PPM header") from None
    if width <= 0 or height <= 0:
        raise FrameError(f"{name}: empty raster {width}x{height}")
    if maxval != 255:
        raise FrameError(f"{name}: only maxval 255 is supported, got {maxval}")
    # exactly one whitespace byte separates the header from the raster
    pos += 1
    size = width * height * 3
    raster = data[pos : pos + size]
    if len(raster) != size:
        raise FrameError(f"{name}: raster has {len(raster)} bytes, expected {size}")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3)


def encode_ppm(frame) -> bytes:
    frame = np.ascontiguousarray(frame, dtype=np.uint8)
    if frame.ndim != 3 or frame.shape[2] != 3:
        raise FrameError("frame must have shape (h, w, 3)")
    h, w = frame.shape[:2]
    return f"P6\n{w} {h}\n255\n".encode("ascii") + frame.tobytes()


def write_ppm(path, frame):
    Path(path).write_bytes(encode_ppm(frame))


def detect_dot(frame, color_range: ColorRange, role=None, min_pixels=MIN_PIXELS) -> DotDetection:
    """Centroid (x, y) of all pixels of ``frame`` inside ``color_range``."""
    frame = np.asarray(frame)
    if frame.size == 0:
        raise FrameError("empty frame")
    ys, xs = np.nonzero(color_range.mask(frame))
    if len(xs) < min_pixels:
        label = role.value if role is not None else "marker"
        raise MissingMarkerError(
            f"{label}: {len(xs)} matching pixels, need at least {min_pixels}"
        )
    return DotDetection(role, (float(xs.mean()), float(ys.mean())), int(len(xs)))


def frame_angle(red, green, blue) -> float:
    """Angle in degrees between the red->green and red->blue rays."""
    r = np.asarray(red, dtype=float)
    v1 = np.asarray(green, dtype=float) - r
    v2 = np.asarray(blue, dtype=float) - r
    n1 = np.hypot(*v1)
    n2 = np.hypot(*v2)
    if n1 == 0 or n2 == 0:
        raise DegenerateError("marker centroids coincide; angle is undefined")
    # atan2 of cross and dot stays accurate near 0 and 180 where acos does not
    cross = v1[0] * v2[1] - v1[1] * v2[0]
    return float(np.degrees(np.arctan2(abs(cross), v1 @ v2)))


def measure_frame(frame, ranges=None, min_pixels=MIN_PIXELS) -> float:
    ranges = {**DEFAULT_RANGES, **(ranges or {})}
    dots = {
        role: detect_dot(frame, ranges[role], role, min_pixels).centroid for role in MarkerRole
    }
    return frame_angle(dots[MarkerRole.RED], dots[MarkerRole.GREEN], dots[MarkerRole.BLUE])


def read_manifest(path) -> list[tuple[float, Path]]:
    """Rows of a ``t_s,path`` manifest; relative frame paths resolve against its folder."""
    path = Path(path)
    base = path.parent
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["t_s", "path"]:
            raise DataError(f"{path}:1: expected header t_s,path")
        for lineno, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            if len(row) != 2:
                raise DataError(f"{path}:{lineno}: expected 2 fields")
            try:
                t = float(row[0])
            except ValueError:
                raise DataError(f"{path}:{lineno}: bad timestamp {row[0]!r}") from None
            rows.append((t, base / row[1].strip()))
    return rows


def extract_trace(manifest, ranges=None, min_pixels=MIN_PIXELS, workers=None):
    """Measure every frame listed in ``manifest``.

    Returns ``(angles, failures)``. A frame that cannot be read or measured
    becomes a :class:`FrameFailure`; the other frames are unaffected. Output
    keeps manifest order.
    """
    rows = read_manifest(manifest) if isinstance(manifest, (str, Path)) else list(manifest)

    def one(row):
        t, path = row
        try:
            return FrameAngle(t, measure_frame(read_ppm(path), ranges, min_pixels))
        except (DataError, DegenerateError) as exc:
            return FrameFailure(t, str(path), str(exc))

    if workers and workers > 1 and len(rows) > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(one, rows))
    else:
        results = [one(r) for r in rows]
    angles = [r for r in results if isinstance(r, FrameAngle)]
    failures = [r for r in results if isinstance(r, FrameFailure)]
    return angles, failures
