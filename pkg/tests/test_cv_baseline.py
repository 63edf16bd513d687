import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kneerom.cv_baseline import (
    DEFAULT_RANGES,
    ColorRange,
    MarkerRole,
    decode_ppm,
    detect_dot,
    encode_ppm,
    extract_trace,
    frame_angle,
    measure_frame,
    read_ppm,
    write_ppm,
)
from kneerom.errors import DataError, DegenerateError, FrameError, MissingMarkerError
from kneerom.simulate import render_frame

RED = DEFAULT_RANGES[MarkerRole.RED]


def black(h=60, w=80):
    return np.zeros((h, w, 3), dtype=np.uint8)


def test_color_range_validation():
    with pytest.raises(DataError):
        ColorRange((10, 0, 0), (5, 255, 255))


def test_black_frame_missing_marker():
    with pytest.raises(MissingMarkerError):
        detect_dot(black(), RED, MarkerRole.RED)


def test_square_centroid():
    f = black()
    f[20:25, 10:15] = (255, 0, 0)
    d = detect_dot(f, RED)
    assert d.centroid == (12.0, 22.0)
    assert d.pixel_count == 25


def test_two_blobs_average():
    f = black(120, 120)
    f[0:4, 0:4] = (255, 0, 0)
    f[100:104, 100:104] = (255, 0, 0)
    assert detect_dot(f, RED).centroid == (51.5, 51.5)
    # single pixels at (0,0) and (100,100) land exactly on the midpoint
    g = black(120, 120)
    g[0, 0] = g[100, 100] = (255, 0, 0)
    assert detect_dot(g, RED, min_pixels=2).centroid == (50.0, 50.0)


def test_empty_frame():
    with pytest.raises(FrameError):
        detect_dot(np.zeros((0, 0, 3), np.uint8), RED)


@given(st.integers(0, 40), st.integers(0, 30))
def test_centroid_shift_equivariance(dx, dy):
    f = black(100, 100)
    f[5:12, 8:13] = (200, 50, 50)
    g = np.roll(np.roll(f, dy, axis=0), dx, axis=1)
    (x0, y0), (x1, y1) = detect_dot(f, RED).centroid, detect_dot(g, RED).centroid
    assert (x1 - x0, y1 - y0) == (dx, dy)


@pytest.mark.parametrize(
    "g,b,expected", [((0, 10), (10, 0), 90.0), ((-10, 0), (10, 0), 180.0), ((10, 0), (10, 0), 0.0)]
)
def test_frame_angle(g, b, expected):
    assert frame_angle((0, 0), g, b) == pytest.approx(expected, abs=1e-9)


def test_coincident_points():
    with pytest.raises(DegenerateError):
        frame_angle((1, 1), (1, 1), (5, 5))


pts = st.tuples(st.floats(-100, 100), st.floats(-100, 100))


@given(pts, pts, pts, st.floats(0, 360), st.floats(0.1, 10), pts)
def test_frame_angle_invariances(r, g, b, rot, scale, shift):
    r, g, b = map(np.array, (r, g, b))
    if min(np.linalg.norm(g - r), np.linalg.norm(b - r)) < 1.0:
        return
    base = frame_angle(r, g, b)
    c, s = np.cos(np.radians(rot)), np.sin(np.radians(rot))
    m = scale * np.array([[c, -s], [s, c]])
    moved = [m @ p + np.array(shift) for p in (r, g, b)]
    assert frame_angle(*moved) == pytest.approx(base, abs=1e-6)
    assert frame_angle(r, b, g) == pytest.approx(base, abs=1e-9)
    assert 0 <= base <= 180


def test_frame_angle_against_acos():
    r, g, b = np.array([3.0, 4.0]), np.array([20.0, -7.0]), np.array([-5.0, 30.0])
    v1, v2 = g - r, b - r
    expected = np.degrees(np.arccos(v1 @ v2 / np.linalg.norm(v1) / np.linalg.norm(v2)))
    assert frame_angle(r, g, b) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("flexion", [0, 30, 58, 90, 135])
def test_rendered_sweep(flexion):
    assert 180 - measure_frame(render_frame(flexion)) == pytest.approx(flexion, abs=1.0)


def test_ppm_roundtrip(tmp_path):
    f = render_frame(40)
    write_ppm(tmp_path / "a.ppm", f)
    np.testing.assert_array_equal(read_ppm(tmp_path / "a.ppm"), f)


def test_ppm_header_with_comment():
    raw = b"P6\n# made by hand\n2 1\n255\n" + bytes([1, 2, 3, 4, 5, 6])
    np.testing.assert_array_equal(decode_ppm(raw), [[[1, 2, 3], [4, 5, 6]]])


@pytest.mark.parametrize(
    "raw",
    [b"P3\n1 1\n255\n0 0 0", b"P6\n2 2\n255\n\x00\x00", b"P6\n1 1\n65535\n\x00" * 6, b"P6\nx 1\n255\n\x00\x00\x00", b"P6"],
)
def test_malformed_ppm(raw):
    with pytest.raises(FrameError):
        decode_ppm(raw)


def write_manifest(tmp_path, frames, corrupt=()):
    lines = ["t_s,path"]
    for i, fr in enumerate(frames):
        name = f"f{i}.ppm"
        if i in corrupt:
            (tmp_path / name).write_bytes(b"garbage")
        else:
            (tmp_path / name).write_bytes(encode_ppm(fr))
        lines.append(f"{i * 0.1:.1f},{name}")
    (tmp_path / "manifest.csv").write_text("\n".join(lines) + "\n")
    return tmp_path / "manifest.csv"


def test_empty_manifest(tmp_path):
    (tmp_path / "m.csv").write_text("t_s,path\n")
    assert extract_trace(tmp_path / "m.csv") == ([], [])


def test_fixed_pose_deterministic(tmp_path):
    angles, failures = extract_trace(write_manifest(tmp_path, [render_frame(45)] * 3))
    assert len(angles) == 3 and not failures
    assert len({a.angle for a in angles}) == 1


@pytest.mark.parametrize("workers", [1, 4])
def test_corrupt_frame_isolated(tmp_path, workers):
    frames = [render_frame(10 * i) for i in range(10)]
    angles, failures = extract_trace(write_manifest(tmp_path, frames, corrupt={4}), workers=workers)
    assert len(angles) == 9 and len(failures) == 1
    assert failures[0].t == pytest.approx(0.4)
    assert [a.t for a in angles] == sorted(a.t for a in angles)


def test_missing_file_recorded(tmp_path):
    (tmp_path / "m.csv").write_text("t_s,path\n0.0,nope.ppm\n")
    angles, failures = extract_trace(tmp_path / "m.csv")
    assert not angles and "cannot read" in failures[0].reason


def test_missing_marker_recorded(tmp_path):
    f = render_frame(30)
    f[np.all(f == (0, 0, 255), axis=-1)] = 0
    angles, failures = extract_trace(write_manifest(tmp_path, [f]))
    assert not angles and "blue" in failures[0].reason


def test_bad_manifest_header(tmp_path):
    (tmp_path / "m.csv").write_text("time,file\n")
    with pytest.raises(DataError):
        extract_trace(tmp_path / "m.csv")
