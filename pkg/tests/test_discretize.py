import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kneerom.discretize import (
    DiscretizeConfig,
    HoldEvent,
    KneeAngleTrace,
    discretize,
    rolling_std,
    threshold_report,
    upward_crossings,
)
from kneerom.errors import ConfigError, DataError
from kneerom.simulate import staircase_motion

RATE = 250.0


def trace_of(angle, rate=RATE):
    return KneeAngleTrace(np.arange(len(angle)) / rate, np.asarray(angle, dtype=float))


def test_rolling_std_matches_brute_force():
    x = np.random.default_rng(2).normal(50, 10, 600)
    brute = np.array([np.std(x[i : i + 250]) for i in range(len(x) - 249)])
    np.testing.assert_allclose(rolling_std(x, 250), brute, atol=1e-9)


def test_config_validation():
    with pytest.raises(ConfigError):
        DiscretizeConfig(hold_std_deg=5.0, move_std_deg=4.0)
    with pytest.raises(ConfigError):
        DiscretizeConfig(window_s=0)


def test_constant_trace_single_hold():
    holds = discretize(trace_of(np.full(5 * 250, 30.0)))
    assert len(holds) == 1
    assert holds[0].angle_mean == 30.0


def test_two_dwells():
    m = staircase_motion((0.0, 90.0), dwell=3.0, ramp=0.2)
    holds = discretize(KneeAngleTrace(m.t, m.flexion))
    assert [round(h.angle_mean) for h in holds] == [0, 90]


def test_staircase_thirty_sixty_ninety():
    m = staircase_motion((30.0, 60.0, 90.0), dwell=3.0)
    holds = discretize(KneeAngleTrace(m.t, m.flexion))
    assert len(holds) == 3
    for h, level in zip(holds, (30, 60, 90)):
        assert abs(h.angle_mean - level) <= 1.0


def test_window_longer_than_trace():
    with pytest.raises(DataError):
        discretize(trace_of(np.zeros(100)))


def test_window_too_short():
    with pytest.raises(DataError):
        discretize(trace_of(np.zeros(100)), DiscretizeConfig(window_s=0.001))


def random_dwells(draw_levels, dwell_s):
    pieces = []
    for level in draw_levels:
        pieces.append(np.full(int(dwell_s * RATE), level))
    return np.concatenate(pieces)


levels = st.lists(st.integers(0, 13).map(lambda k: 10.0 * k), min_size=1, max_size=6).filter(
    lambda ls: all(a != b for a, b in zip(ls, ls[1:]))
)


@settings(max_examples=30, deadline=None)
@given(levels, st.integers(0, 10_000))
def test_hold_properties(ls, seed):
    rng = np.random.default_rng(seed)
    angle = random_dwells(ls, 2.5) + rng.normal(0, 0.2, len(ls) * int(2.5 * RATE))
    tr = trace_of(angle)
    cfg = DiscretizeConfig()
    holds = discretize(tr, cfg)
    assert [round(h.angle_mean, -1) for h in holds] == ls
    assert all(a.t_mean < b.t_mean for a, b in zip(holds, holds[1:]))
    n = int(round(cfg.window_s * RATE))
    std = rolling_std(tr.angle, n)
    for a, b in zip(holds, holds[1:]):
        assert std[a.start : b.start].max() > cfg.move_std_deg
    for h in holds:
        window = tr.angle[h.start : h.stop]
        assert window.min() <= h.angle_mean <= window.max()
    back = discretize(tr.reversed(), cfg)
    assert sorted(h.angle_mean for h in back) == pytest.approx(sorted(h.angle_mean for h in holds), abs=1.0)


def test_threshold_bins():
    holds = [HoldEvent(1.0, 30.4), HoldEvent(2.0, 59.2), HoldEvent(3.0, 91.0), HoldEvent(4.0, 45.0)]
    rep = threshold_report(holds, trace_of(np.zeros(10)), (30, 60, 90), 5)
    assert rep.counts == [1, 1, 1]
    assert rep.unbinned == 1


def test_no_alerts_below_ceiling():
    rep = threshold_report([], trace_of(np.linspace(0, 80, 500)), ceiling=120)
    assert rep.alerts == []


def test_single_upward_crossing():
    rep = threshold_report([], trace_of(np.linspace(0, 130, 500)), ceiling=120)
    assert len(rep.alerts) == 1 and rep.alerts[0][1] == "ceiling"


def test_floor_crossings():
    a = 10 + 10 * np.cos(np.linspace(0, 6 * np.pi, 900))
    rep = threshold_report([], trace_of(a), floor=5)
    assert len(rep.alerts) == 3


def test_bad_tolerance():
    with pytest.raises(ConfigError):
        threshold_report([], trace_of(np.zeros(10)), tol=0)


@given(st.lists(st.floats(-50, 200), min_size=2, max_size=200), st.floats(-50, 200))
def test_alert_count_is_negative_to_positive_sign_changes(values, ceiling):
    a = np.array(values)
    d = a - ceiling
    expected = sum(1 for x, y in zip(d, d[1:]) if x < 0 <= y)
    assert len(upward_crossings(a, ceiling)) == expected
