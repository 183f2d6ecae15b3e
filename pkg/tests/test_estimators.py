import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from vplaguerre import TruncatedLagrangeInterpolation, VPApproximation
from vplaguerre.analysis import test_function as benchmark
from vplaguerre.approximants import build_pair, eval_lagrange, eval_vp


def test_get_params_and_clone():
    est = VPApproximation(n=40, m=8, alpha=0.5, gamma=0.5, rho=0.3)
    params = est.get_params()
    assert params == {"n": 40, "m": 8, "theta": 0.5, "alpha": 0.5, "gamma": 0.5, "rho": 0.3}
    twin = clone(est)
    assert twin.get_params() == params and twin is not est
    est.set_params(n=50)
    assert est.n == 50
    assert TruncatedLagrangeInterpolation().get_params()["N"] == 100


def test_vp_estimator_matches_functional_api():
    tf = benchmark(3)
    est = VPApproximation(n=60, m=12, alpha=tf.alpha, gamma=tf.gamma, rho=0.25).fit(tf)
    vp, lag = build_pair(tf.alpha, tf.gamma, 60, 12, 0.25, tf)
    x = np.linspace(0.0, 30.0, 200)
    np.testing.assert_array_equal(est.predict_weighted(x), eval_vp(vp, x))
    np.testing.assert_allclose(est.predict(x[1:]), eval_vp(vp, x[1:], weighted=False))
    assert est.n_evaluations_ == vp.j and est.m_ == 12
    lest = TruncatedLagrangeInterpolation(N=60, alpha=tf.alpha, gamma=tf.gamma, rho=0.25).fit(tf)
    np.testing.assert_array_equal(lest.predict_weighted(x), eval_lagrange(lag, x))


def test_fit_from_sample_arrays():
    tf = benchmark(2)
    est = VPApproximation(n=50, theta=0.4, alpha=0.5, gamma=0.5)
    X = est.sample_points()
    a = clone(est).fit(X.reshape(-1, 1), tf(X))
    b = clone(est).fit(tf)
    x = np.linspace(0.1, 20, 50)
    np.testing.assert_allclose(a.predict(x), b.predict(x), rtol=1e-13)
    assert a.m_ == 20
    with pytest.raises(ValueError, match="sampling points"):
        clone(est).fit(X[:-1], tf(X[:-1]))
    with pytest.raises(ValueError, match="y is required"):
        clone(est).fit(X)


def test_score_is_negative_max_weighted_error():
    tf = benchmark(4)
    est = VPApproximation(n=80, m=40, alpha=0.6, gamma=0.6).fit(tf)
    x = np.linspace(0.05, 20, 300)
    s = est.score(x, tf(x))
    assert s <= 0
    u = x**0.6 * np.exp(-x / 2)
    assert s == pytest.approx(-np.max(np.abs(est.predict_weighted(x) - tf(x) * u)))


def test_unfitted_and_invalid_params():
    with pytest.raises(NotFittedError):
        VPApproximation().predict([1.0])
    with pytest.raises(ValueError, match="alpha"):
        VPApproximation(alpha=-1.0).fit(np.cos)
    with pytest.raises(ValueError, match="m must"):
        VPApproximation(n=10, m=10).fit(np.cos)
    with pytest.raises(ValueError, match="rho"):
        TruncatedLagrangeInterpolation(rho=1.2).fit(np.cos)
    with pytest.raises(ValueError):
        VPApproximation(n=10, m=2).fit(np.cos).predict([-1.0])
    with pytest.raises(ValueError):
        VPApproximation(n=10, m=2).fit(np.cos).predict(np.ones((3, 2)))
