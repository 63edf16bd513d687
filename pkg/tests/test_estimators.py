import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline

from kneerom import GravityFilter, HoldDiscretizer, KneeAngleEstimator
from kneerom.gravity import FilterSpec, StreamingLowpass
from kneerom.method_b import knee_angles_b
from kneerom.simulate import hinge_motion, sensor_traces, staircase_motion


def test_get_params_and_clone():
    est = KneeAngleEstimator(method="b", correct_y_offset=False)
    assert est.get_params() == {"method": "b", "correct_y_offset": False}
    assert clone(est).get_params() == est.get_params()
    gf = GravityFilter().set_params(cutoff_hz=2.0)
    assert gf.cutoff_hz == 2.0


def test_gravity_filter_matches_streaming():
    x = np.random.default_rng(0).normal(size=(500, 6))
    gf = GravityFilter().fit(x)
    np.testing.assert_allclose(gf.transform(x), StreamingLowpass(FilterSpec()).process(x))
    assert gf.delay_s_ == pytest.approx(0.41587, abs=1e-4)


def test_invalid_method():
    with pytest.raises(ValueError):
        KneeAngleEstimator(method="z").fit(np.ones((3, 6)))


def test_wrong_width():
    with pytest.raises(ValueError):
        KneeAngleEstimator().fit(np.ones((3, 5)))


def test_pipeline_composes():
    m = hinge_motion(duration=4.0)
    th, sh = sensor_traces(m)
    X = np.hstack([th.acc, sh.acc])
    pipe = make_pipeline(GravityFilter(), KneeAngleEstimator(method="b"))
    out = pipe.fit_transform(X)
    assert out.shape == (len(X), 1)
    lp = StreamingLowpass(FilterSpec())
    g = lp.process(X)
    np.testing.assert_allclose(out[:, 0], knee_angles_b(g[:, :3], g[:, 3:]))


def test_transform_before_fit():
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        GravityFilter().transform(np.ones((3, 3)))


def test_hold_discretizer():
    m = staircase_motion()
    holds = HoldDiscretizer().fit_transform(np.column_stack([m.t, m.flexion]))
    assert holds.shape == (3, 2)
    np.testing.assert_allclose(holds[:, 1], [30, 60, 90], atol=1.0)
