"""scikit-learn style front ends for the two approximation operators.

Both estimators learn a polynomial from samples of ``f`` at the first ``j``
Laguerre zeros.  ``fit`` accepts either the function itself or the pair
``(X, y)`` of sampling points and values, where ``X`` must be
:meth:`sample_points`.

>>> import numpy as np
>>> est = VPApproximation(n=70, m=7, alpha=-0.4, gamma=0.05, rho=0.49)
>>> est = est.fit(lambda x: np.exp(x / 4))
>>> float(abs(est.predict([1.0])[0] - np.exp(0.25))) < 1e-12
True
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .approximants import (
    build_lagrange,
    build_vp_approximant,
    eval_lagrange,
    eval_vp,
    u_weight,
    vp_filter,
    weighted_samples,
)
from .basis import WeightPair
from .quadrature import build_gauss_rule, truncation_index
from .validation import (
    check_alpha,
    check_gamma,
    check_localization,
    check_order,
    check_points,
    check_rho,
    check_samples,
    check_theta,
)


class _LaguerreSampler(BaseEstimator):
    """Shared sampling logic: rule, truncation and the ``fit`` input contract."""

    def _setup(self, order):
        alpha = check_alpha(self.alpha)
        check_gamma(self.gamma)
        rho = check_rho(self.rho)
        self.weights_ = WeightPair(alpha, float(self.gamma))
        self.rule_ = build_gauss_rule(alpha, order)
        self.trunc_ = truncation_index(self.rule_, rho)
        self.n_evaluations_ = self.trunc_.j

    def sample_points(self):
        """Points at which ``f`` must be sampled (requires the order params only)."""
        order = self._order()
        rule = build_gauss_rule(check_alpha(self.alpha), order)
        return rule.nodes[: truncation_index(rule, check_rho(self.rho)).j].copy()

    def _weighted_samples(self, X, y, weighted_func):
        nodes = self.rule_.nodes[: self.trunc_.j]
        if callable(X):
            return weighted_samples(X, self.rule_.alpha, nodes, weighted_func)
        X = check_points(X, "X")
        if X.shape != nodes.shape or not np.allclose(X, nodes, rtol=1e-10, atol=0):
            raise ValueError(
                f"X must be the {nodes.size} sampling points returned by sample_points()"
            )
        if y is None:
            raise ValueError("y is required when X is an array of sampling points")
        y = check_samples(y, nodes.size, "y")
        return weighted_samples(lambda _: y, self.rule_.alpha, nodes)

    def score(self, X, y):
        """Negative maximum weighted error ``-max |(A(x) - y) u(x)|`` (greater is better)."""
        X = check_points(X, "X")
        y = np.asarray(y, dtype=float).reshape(-1)
        u = u_weight(self.gamma, X)
        return -float(np.max(np.abs(self.predict_weighted(X) - y * u)))


class VPApproximation(_LaguerreSampler):
    """Discrete de la Vallee Poussin filtered approximation on truncated Laguerre zeros.

    Parameters
    ----------
    n : int
        Number of Laguerre zeros of the underlying Gauss rule.
    m : int, optional
        Localization parameter, ``0 < m < n``.  When omitted,
        ``m = floor(theta * n)``.
    theta : float
        Used only when ``m`` is None.
    alpha : float
        Exponent of ``w(x) = x**alpha exp(-x)``, ``alpha > -1``.
    gamma : float
        Exponent of ``u(x) = x**gamma exp(-x/2)``, ``gamma >= 0``.
    rho : float
        Truncation parameter in (0, 1): nodes beyond ``4 n rho`` are dropped.

    Attributes
    ----------
    approximant_ : VPApproximant
    m_ : int
    n_evaluations_ : int
        Number of function samples ``j``.
    """

    def __init__(self, n=100, m=None, theta=0.5, alpha=0.0, gamma=0.0, rho=0.25):
        self.n = n
        self.m = m
        self.theta = theta
        self.alpha = alpha
        self.gamma = gamma
        self.rho = rho

    def _order(self):
        return check_order(self.n, "n", minimum=2)

    def _resolve_m(self):
        n = self._order()
        if self.m is None:
            m = max(1, int(math.floor(check_theta(self.theta) * n)))
        else:
            m = self.m
        return check_localization(n, m)

    def fit(self, X, y=None, weighted_func=None):
        """Build the filtered polynomial.

        Parameters
        ----------
        X : callable or array-like
            Either ``f`` (vectorized) or the sampling points.
        y : array-like, optional
            ``f`` at the sampling points when ``X`` is an array.
        weighted_func : callable, optional
            Closed form of ``f(x) sqrt(w(x))`` for rapidly growing ``f``.
        """
        self._setup(self._order())
        self.m_ = self._resolve_m()
        self.filter_ = vp_filter(self.rule_.n, self.m_)
        g = self._weighted_samples(X, y, weighted_func)
        self.approximant_ = build_vp_approximant(self.rule_, self.trunc_, self.filter_, g, self.gamma)
        return self

    def predict(self, X):
        check_is_fitted(self, "approximant_")
        return eval_vp(self.approximant_, check_points(X, "X"), weighted=False)

    def predict_weighted(self, X):
        """``V(x) u(x)``; finite for every ``x >= 0``."""
        check_is_fitted(self, "approximant_")
        return eval_vp(self.approximant_, check_points(X, "X"), weighted=True)


class TruncatedLagrangeInterpolation(_LaguerreSampler):
    """Lagrange interpolation at the first ``j`` zeros of ``p_N`` plus the node ``4N``.

    Parameters
    ----------
    N : int
        Degree of the Laguerre polynomial whose zeros are used.
    alpha, gamma, rho : float
        As in :class:`VPApproximation`.
    """

    def __init__(self, N=100, alpha=0.0, gamma=0.0, rho=0.25):
        self.N = N
        self.alpha = alpha
        self.gamma = gamma
        self.rho = rho

    def _order(self):
        return check_order(self.N, "N", minimum=1)

    def fit(self, X, y=None, weighted_func=None):
        self._setup(self._order())
        g = self._weighted_samples(X, y, weighted_func)
        self.approximant_ = build_lagrange(self.rule_, self.trunc_, g, self.gamma)
        return self

    def predict(self, X):
        check_is_fitted(self, "approximant_")
        return eval_lagrange(self.approximant_, check_points(X, "X"), weighted=False)

    def predict_weighted(self, X):
        check_is_fitted(self, "approximant_")
        return eval_lagrange(self.approximant_, check_points(X, "X"), weighted=True)
