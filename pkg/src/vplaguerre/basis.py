"""Overflow-safe orthonormal Laguerre polynomials.

The orthonormal polynomials ``p_i`` for the weight ``w(x) = x**alpha * exp(-x)``
have positive leading coefficients and satisfy

    x p_i = b_{i+1} p_{i+1} + a_i p_i + b_i p_{i-1},
    a_i = 2 i + alpha + 1,   b_i = sqrt(i (i + alpha)),

with ``p_0 = 1 / sqrt(Gamma(alpha + 1))``.  For large ``x`` and degree the raw
values of ``p_i`` overflow while ``sqrt(w(x))`` underflows, so every routine here
returns the *weighted* basis ``q_i(x) = p_i(x) * sqrt(w(x))``.  The recurrence
is run on binary-rescaled values with an integer exponent tracked per point;
the square-root weight is folded in only when a value is emitted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .validation import check_alpha, check_gamma

DEGREE_CAP = 5000

_LN2 = math.log(2.0)
_UPPER = 1e100
_LOWER = 1e-100


@dataclass(frozen=True)
class WeightPair:
    """Laguerre exponent ``alpha`` of ``w`` and norm exponent ``gamma`` of ``u``.

    ``w(x) = x**alpha * exp(-x)`` and ``u(x) = x**gamma * exp(-x/2)``.
    """

    alpha: float
    gamma: float

    def __post_init__(self):
        check_alpha(self.alpha)
        check_gamma(self.gamma)

    @property
    def in_vp_range(self) -> bool:
        """Whether the pair satisfies the sufficient condition for bounded VP operators."""
        a, g = self.alpha, self.gamma
        return max(a / 2 - 0.25, 0.0) < g < min(a / 2 + 7 / 6, a + 1)

    @property
    def in_lagrange_range(self) -> bool:
        """Whether the pair gives logarithmic Lebesgue constants for truncated Lagrange."""
        a, g = self.alpha, self.gamma
        return max(0.0, a / 2 + 0.25) <= g <= a / 2 + 1.25

    @property
    def exponent_shift(self) -> float:
        """``gamma - alpha/2``: converts ``sqrt(w)`` weighting into ``u`` weighting."""
        return self.gamma - self.alpha / 2


@dataclass(frozen=True)
class WeightedBasisRow:
    alpha: float
    x: float
    degree: int
    values: np.ndarray = field(repr=False)


def recurrence_coefficients(alpha, k):
    """Jacobi-matrix entries ``(a_k, b_k)`` for the orthonormal Laguerre family.

    ``b_0`` is 0 by convention.
    """
    check_alpha(alpha)
    if k < 0:
        raise ValueError(f"index k must be >= 0, got {k}")
    return 2.0 * k + alpha + 1.0, math.sqrt(k * (k + alpha))


def jacobi_matrix(alpha, n):
    """Diagonal and off-diagonal (``b_1..b_{n-1}``) of the ``n x n`` Jacobi matrix."""
    check_alpha(alpha)
    k = np.arange(n, dtype=float)
    diag = 2.0 * k + alpha + 1.0
    off = np.sqrt(k[1:] * (k[1:] + alpha))
    return diag, off


def log_p0(alpha):
    return -0.5 * math.lgamma(alpha + 1.0)


def _check_points(x, strict=False):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("evaluation points must be finite")
    if strict and np.any(x <= 0):
        raise ValueError("evaluation points must be > 0")
    if np.any(x < 0):
        raise ValueError("evaluation points must be >= 0")
    return x


def _check_degree(degree, cap):
    degree = int(degree)
    if degree < 0:
        raise ValueError(f"degree must be >= 0, got {degree}")
    if degree > cap:
        raise ValueError(f"degree {degree} exceeds the configured cap {cap}")
    return degree


def _half_log_weight(alpha, x):
    with np.errstate(divide="ignore"):
        return 0.5 * (alpha * np.log(x) - x)


def _rescale(P, Pold, K, extra=()):
    """Shift ``P, Pold`` (and ``extra`` arrays) by powers of two where out of range.

    Modifies the arrays in place and updates the integer exponents ``K``.
    """
    mag = np.maximum(np.abs(P), np.abs(Pold))
    for arr in extra:
        mag = np.maximum(mag, np.abs(arr))
    bad = (mag > _UPPER) | ((mag < _LOWER) & (mag > 0))
    if not bad.any():
        return
    _, e = np.frexp(mag[bad])
    P[bad] = np.ldexp(P[bad], -e)
    Pold[bad] = np.ldexp(Pold[bad], -e)
    for arr in extra:
        arr[bad] = np.ldexp(arr[bad], -e)
    K[bad] += e


def weighted_basis_matrix(alpha, x, degree, cap=DEGREE_CAP, log_weight=None):
    """Matrix ``Q[i, t] = p_i(x_t) * exp(log_weight(x_t))`` for ``i = 0..degree``.

    ``log_weight`` defaults to ``log sqrt(w(x))``, giving the stabilized basis.
    Points must be strictly positive; use :func:`eval_weighted_basis` for
    ``x = 0``.
    """
    check_alpha(alpha)
    x = _check_points(np.atleast_1d(x), strict=True)
    degree = _check_degree(degree, cap)
    hw = _half_log_weight(alpha, x) if log_weight is None else np.asarray(log_weight, float)
    hw = np.broadcast_to(hw, x.shape)

    out = np.empty((degree + 1, x.size))
    lp0 = log_p0(alpha)
    Pold = np.zeros_like(x)
    P = np.ones_like(x)
    K = np.zeros(x.shape, dtype=np.int64)
    base = hw + lp0
    out[0] = np.exp(base)
    b_prev = 0.0
    for i in range(degree):
        a_i = 2.0 * i + alpha + 1.0
        b_next = math.sqrt((i + 1) * (i + 1 + alpha))
        Pnew = ((x - a_i) * P - b_prev * Pold) / b_next
        Pold, P = P, Pnew
        _rescale(P, Pold, K)
        out[i + 1] = P * np.exp(base + K * _LN2)
        b_prev = b_next
    return out


def eval_weighted_basis(alpha, x, degree, cap=DEGREE_CAP):
    """Stabilized basis values ``p_i(x) sqrt(w(x))``, ``i = 0..degree``, at one point.

    At ``x = 0`` the limit is returned: zeros for ``alpha > 0``, ``p_i(0)`` for
    ``alpha = 0``; for ``alpha < 0`` the weighted basis is unbounded there and
    ``inf``-signed values are returned.
    """
    check_alpha(alpha)
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    if x < 0:
        raise ValueError("x must be >= 0")
    degree = _check_degree(degree, cap)
    if x > 0:
        values = weighted_basis_matrix(alpha, np.array([x]), degree, cap=cap)[:, 0]
    else:
        p0 = polynomials_at_zero(alpha, degree)
        if alpha > 0:
            values = np.zeros(degree + 1)
        elif alpha == 0:
            values = p0
        else:
            values = np.copysign(np.inf, p0)
    return WeightedBasisRow(alpha=alpha, x=x, degree=degree, values=values)


def polynomials_at_zero(alpha, degree):
    """Unweighted ``p_i(0)``; moderate in size since ``|p_i(0)| ~ i**(alpha/2)``."""
    out = np.empty(degree + 1)
    p_old, p = 0.0, math.exp(log_p0(alpha))
    out[0] = p
    b_prev = 0.0
    for i in range(degree):
        a_i = 2.0 * i + alpha + 1.0
        b_next = math.sqrt((i + 1) * (i + 1 + alpha))
        p_old, p = p, (-a_i * p - b_prev * p_old) / b_next
        out[i + 1] = p
        b_prev = b_next
    return out


def weighted_value_and_derivative(alpha, x, degree, cap=DEGREE_CAP):
    """Vectorized ``(q_n(x), q_n'(x))`` for ``n = degree`` at points ``x > 0``.

    Value and derivative recurrences share one scaling exponent, so the ratio
    ``q_n / q_n'`` is available even where both overflow individually; it is
    returned as the third element.
    """
    check_alpha(alpha)
    x = _check_points(np.atleast_1d(x), strict=True)
    degree = _check_degree(degree, cap)
    hw = _half_log_weight(alpha, x)
    base = hw + log_p0(alpha)

    Pold = np.zeros_like(x)
    P = np.ones_like(x)
    Dold = np.zeros_like(x)
    D = np.zeros_like(x)
    K = np.zeros(x.shape, dtype=np.int64)
    b_prev = 0.0
    for i in range(degree):
        a_i = 2.0 * i + alpha + 1.0
        b_next = math.sqrt((i + 1) * (i + 1 + alpha))
        Dnew = ((x - a_i) * D + P - b_prev * Dold) / b_next
        Pnew = ((x - a_i) * P - b_prev * Pold) / b_next
        Dold, D = D, Dnew
        Pold, P = P, Pnew
        _rescale(P, Pold, K, extra=(D, Dold))
        b_prev = b_next
    # d/dx sqrt(w) = sqrt(w) * (alpha / (2x) - 1/2)
    dlog = alpha / (2.0 * x) - 0.5
    D_weighted = D + P * dlog
    scale = np.exp(base + K * _LN2)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = P / D_weighted
    return P * scale, D_weighted * scale, ratio


def eval_weighted_basis_with_derivative(alpha, x, degree, cap=DEGREE_CAP):
    """``q_n(x)`` and ``d/dx q_n(x)`` at a single point ``x > 0``."""
    x = float(x)
    if not math.isfinite(x) or x <= 0:
        raise ValueError(f"x must be finite and > 0, got {x}")
    value, deriv, _ = weighted_value_and_derivative(alpha, np.array([x]), degree, cap=cap)
    return float(value[0]), float(deriv[0])
