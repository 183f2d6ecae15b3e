"""Discrete de la Vallee Poussin (VP) approximation and truncated Lagrange interpolation.

Both operators sample ``f`` only at the first ``j`` zeros of ``p_n``.  Samples
travel through the code in *weighted* form, ``g_k = f(x_k) sqrt(w(x_k))``,
because ``f`` may grow like ``exp(x/2)`` while only products with the weight
stay representable.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .basis import polynomials_at_zero, weighted_basis_matrix, weighted_value_and_derivative
from .quadrature import TruncationParams, build_gauss_rule, truncation_index
from .validation import check_gamma, check_localization, check_order, check_points

# Points per block when sweeping the basis over a mesh.  Fixed so that every
# point sees the same arithmetic whatever the thread count.
CHUNK = 512


class RepresentabilityError(ValueError):
    """An unweighted value was requested where ``u(x)`` under/overflows."""


def _half_log_w(alpha, x):
    with np.errstate(divide="ignore"):
        return 0.5 * (alpha * np.log(x) - x)


def _log_u(gamma, x):
    with np.errstate(divide="ignore"):
        return gamma * np.log(x) - 0.5 * x


def u_weight(gamma, x):
    """``u(x) = x**gamma exp(-x/2)``."""
    x = np.asarray(x, dtype=float)
    out = np.full(x.shape, 1.0 if gamma == 0 else 0.0)
    pos = x > 0
    with np.errstate(under="ignore"):
        out[pos] = np.exp(_log_u(gamma, x[pos]))
    return out


def weighted_samples(func, alpha, x, weighted_func=None):
    """``f(x) sqrt(w(x))`` at points ``x``.

    ``weighted_func`` gives the product in closed form; otherwise it is formed
    from ``func`` and rejected if ``func`` overflowed.
    """
    x = np.asarray(x, dtype=float)
    if weighted_func is not None:
        g = np.asarray(weighted_func(x), dtype=float)
    else:
        fx = np.asarray(func(x), dtype=float)
        if not np.all(np.isfinite(fx)):
            raise ValueError(
                "f is not finite at some nodes; supply weighted_func = f * sqrt(w) in closed form"
            )
        with np.errstate(under="ignore"):
            g = fx * np.exp(_half_log_w(alpha, x))
    g = np.broadcast_to(g, x.shape).astype(float)
    if not np.all(np.isfinite(g)):
        raise ValueError("weighted samples f*sqrt(w) are not finite")
    return g


# --------------------------------------------------------------------------- filter


@dataclass(frozen=True)
class VPFilter:
    n: int
    m: int
    coefficients: np.ndarray = field(repr=False)


def vp_filter(n, m):
    """Trapezoidal VP filter ``mu_i``, ``i = 0..n+m-1``.

    ``mu_i = 1`` up to ``i = n - m`` and ``(n + m - i) / (2m)`` afterwards.
    """
    n = check_order(n, "n", minimum=2)
    m = check_localization(n, m)
    i = np.arange(n + m, dtype=float)
    mu = np.where(i <= n - m, 1.0, (n + m - i) / (2.0 * m))
    mu.setflags(write=False)
    return VPFilter(n=n, m=m, coefficients=mu)


# --------------------------------------------------------------------------- coefficients


def discrete_fourier_coefficients(rule, trunc, samples, count):
    """Truncated-rule Fourier coefficients ``c_i = sum_{k<=j} f(x_k) p_i(x_k) lambda_k``.

    ``samples`` are the weighted values ``f(x_k) sqrt(w(x_k))``, ``k = 1..j``;
    the sum is formed as ``sum_k g_k q_i(x_k) lambda_hat_k``.
    """
    j = trunc.j
    g = np.asarray(samples, dtype=float).reshape(-1)
    if g.size != j:
        raise ValueError(f"expected {j} weighted samples, got {g.size}")
    if not np.all(np.isfinite(g)):
        raise ValueError("samples must be finite")
    count = check_order(count, "count", minimum=1)
    if count > 2 * rule.n:
        warnings.warn(
            f"coefficient count {count} exceeds 2n={2 * rule.n}; the rule is not exact there",
            RuntimeWarning,
            stacklevel=2,
        )
    Q = weighted_basis_matrix(rule.alpha, rule.nodes[:j], count - 1)
    return Q @ (g * rule.stabilized_christoffel[:j])


# --------------------------------------------------------------------------- VP


@dataclass(frozen=True)
class VPApproximant:
    """Filtered coefficients ``d_i = mu_i c_i`` of a discrete VP polynomial."""

    alpha: float
    gamma: float
    n: int
    m: int
    j: int
    rho: float
    filtered_coeffs: np.ndarray = field(repr=False)

    @property
    def degree(self):
        return self.n + self.m - 1

    def to_json(self):
        doc = {
            "alpha": self.alpha,
            "gamma": self.gamma,
            "n": self.n,
            "m": self.m,
            "j": self.j,
            "rho": self.rho,
            "filtered_coeffs": [float(f"{c:.17g}") for c in self.filtered_coeffs],
        }
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text)
        coeffs = np.asarray(doc.pop("filtered_coeffs"), dtype=float)
        if coeffs.size != doc["n"] + doc["m"]:
            raise ValueError("filtered_coeffs length does not match n + m")
        return cls(filtered_coeffs=coeffs, **doc)


def build_vp_approximant(rule, trunc, filt, samples, gamma=0.0):
    """Discrete VP polynomial from weighted samples at the first ``j`` nodes."""
    if filt.n != rule.n:
        raise ValueError(f"filter order {filt.n} does not match rule order {rule.n}")
    gamma = check_gamma(gamma)
    c = discrete_fourier_coefficients(rule, trunc, samples, filt.n + filt.m)
    d = filt.coefficients * c
    d.setflags(write=False)
    return VPApproximant(
        alpha=rule.alpha, gamma=gamma, n=rule.n, m=filt.m, j=trunc.j, rho=trunc.rho, filtered_coeffs=d
    )


def _basis_sum(alpha, coeffs, x, log_weight):
    """``sum_i coeffs[i] p_i(x) exp(log_weight(x))`` for ``x > 0`` in fixed-size blocks."""
    out = np.empty(x.size)
    deg = len(coeffs) - 1
    for s in range(0, x.size, CHUNK):
        sl = slice(s, s + CHUNK)
        Q = weighted_basis_matrix(alpha, x[sl], deg, log_weight=log_weight(x[sl]))
        out[sl] = coeffs @ Q
    return out


def eval_vp(approx, x, weighted=True):
    """Evaluate ``V(x) u(x)`` (``weighted=True``) or ``V(x)`` at points ``x >= 0``."""
    x = check_points(x, "x")
    d = approx.filtered_coeffs
    out = np.empty(x.size)
    pos = x > 0
    if weighted:
        out[pos] = _basis_sum(approx.alpha, d, x[pos], lambda t: _log_u(approx.gamma, t))
        if (~pos).any():
            v0 = float(d @ polynomials_at_zero(approx.alpha, len(d) - 1))
            out[~pos] = v0 if approx.gamma == 0 else 0.0
        return out
    # p_i(x) itself may overflow: sum in sqrt(w)-weighted form, then divide.
    xs = x[pos]
    hw = _half_log_w(approx.alpha, xs)
    s = _basis_sum(approx.alpha, d, xs, lambda t: _half_log_w(approx.alpha, t))
    with np.errstate(over="ignore"):
        scale = np.exp(-hw)
    if not np.all(np.isfinite(scale)):
        bad = xs[~np.isfinite(scale)][0]
        raise RepresentabilityError(f"unweighted value not representable at x={bad}")
    out[pos] = s * scale
    if (~pos).any():
        out[~pos] = float(d @ polynomials_at_zero(approx.alpha, len(d) - 1))
    return out


def vp_fundamental_matrix(rule, filt, j, x, gamma):
    """Stable ratios ``Phi_k(x) u(x) / u(x_k)`` for ``k = 1..j`` (rows) at ``x > 0`` (columns).

    ``Phi_k(x) u(x)/u(x_k) = lambda_hat_k (x/x_k)**(gamma - alpha/2)
    sum_i mu_i q_i(x_k) q_i(x)``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x <= 0):
        raise ValueError("fundamental polynomials are evaluated at x > 0")
    nodes = rule.nodes[:j]
    deg = filt.n + filt.m - 1
    Qk = weighted_basis_matrix(rule.alpha, nodes, deg)
    left = (Qk * filt.coefficients[:, None]).T * rule.stabilized_christoffel[:j, None]
    shift = gamma - rule.alpha / 2
    out = np.empty((j, x.size))
    for s in range(0, x.size, CHUNK):
        sl = slice(s, s + CHUNK)
        Qx = weighted_basis_matrix(rule.alpha, x[sl], deg)
        out[:, sl] = (left @ Qx) * (x[None, sl] / nodes[:, None]) ** shift
    return out


def vp_fundamental(rule, filt, k, x, trunc=None, gamma=None):
    """Fundamental VP polynomial ``Phi_k(x) = lambda_k sum_i mu_i p_i(x_k) p_i(x)``.

    With ``gamma`` given, returns the ratio ``Phi_k(x) u(x) / u(x_k)`` instead,
    which stays representable for every ``x``.
    """
    j = rule.n if trunc is None else trunc.j
    if not 1 <= k <= j:
        raise ValueError(f"node index k must lie in 1..{j}, got {k}")
    x = check_points(x, "x")
    if np.any(x <= 0):
        raise ValueError("x must be > 0")
    if gamma is not None:
        return vp_fundamental_matrix(rule, filt, j, x, gamma)[k - 1]
    xk = rule.nodes[k - 1]
    # lambda_k p_i(x_k) p_i(x) = lambda_hat_k q_i(x_k) q_i(x) sqrt(w(x_k) / w(x));
    # gamma = alpha/2 makes the power factor of the ratio form vanish.
    core = vp_fundamental_matrix(rule, filt, j, x, rule.alpha / 2)[k - 1]
    return core * np.exp(_half_log_w(rule.alpha, xk) - _half_log_w(rule.alpha, x))


def eval_vp_kernel(rule, filt, trunc, samples, x, gamma):
    """``V(x) u(x) = sum_k f(x_k) u(x_k) [Phi_k(x) u(x)/u(x_k)]``: the node-side evaluation path."""
    x = check_points(x, "x")
    j = trunc.j
    g = np.asarray(samples, dtype=float)
    fu = g * rule.nodes[:j] ** (gamma - rule.alpha / 2)
    return fu @ vp_fundamental_matrix(rule, filt, j, x, gamma)


# --------------------------------------------------------------------------- Cesaro


def discrete_cesaro(rule, trunc, order, samples):
    """Coefficients of the discrete Cesaro mean ``sigma_order``: ``(order - i)/order * c_i``.

    ``order`` may exceed ``n`` (up to ``2n``); those coefficients are still
    defined by the truncated rule.
    """
    order = check_order(order, "order", minimum=1, maximum=2 * rule.n)
    c = discrete_fourier_coefficients(rule, trunc, samples, order)
    i = np.arange(order, dtype=float)
    return (order - i) / order * c


# --------------------------------------------------------------------------- Lagrange


@dataclass(frozen=True)
class LagrangeApproximant:
    """Truncated Lagrange interpolant on the first ``j`` zeros of ``p_N`` plus the node ``4N``.

    On Gauss nodes ``l_k(x) = lambda_k K_{N-1}(x, x_k) (4N - x)/(4N - x_k)``
    with ``K`` the Darboux kernel, so the interpolant is stored as
    ``(4N - x) sum_{i<N} e_i p_i(x)``.  Evaluating this avoids the common
    factor ``p_N(x)`` of the textbook formula, whose recurrence roundoff would
    otherwise be inherited by every value.
    """

    alpha: float
    gamma: float
    N: int
    j: int
    rho: float
    nodes: np.ndarray = field(repr=False)
    weighted_samples: np.ndarray = field(repr=False)
    weighted_deriv: np.ndarray = field(repr=False)
    kernel_coeffs: np.ndarray = field(repr=False)

    @property
    def node_values_u(self):
        """``f(x_k) u(x_k)`` at the retained nodes."""
        return self.weighted_samples * self.nodes ** (self.gamma - self.alpha / 2)


def build_lagrange(rule, trunc, samples, gamma=0.0):
    """Truncated Lagrange interpolant ``L*_{N+1}`` from weighted samples at ``x_1..x_j``."""
    gamma = check_gamma(gamma)
    j = trunc.j
    g = np.asarray(samples, dtype=float).reshape(-1)
    if g.size != j:
        raise ValueError(f"expected {j} weighted samples, got {g.size}")
    if not np.all(np.isfinite(g)):
        raise ValueError("samples must be finite")
    g = g.copy()
    N = rule.n
    nodes = rule.nodes[:j]
    Q = weighted_basis_matrix(rule.alpha, nodes, N - 1)
    e = Q @ (g * rule.stabilized_christoffel[:j] / (4.0 * N - nodes))
    for arr in (g, e):
        arr.setflags(write=False)
    return LagrangeApproximant(
        alpha=rule.alpha,
        gamma=gamma,
        N=N,
        j=j,
        rho=trunc.rho,
        nodes=nodes,
        weighted_samples=g,
        weighted_deriv=rule.weighted_deriv[:j],
        kernel_coeffs=e,
    )


def lagrange_fundamental_matrix(approx, x):
    """Ratios ``l_k(x) u(x) / u(x_k)`` (rows ``k = 1..j``) at points ``x > 0``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x <= 0):
        raise ValueError("x must be > 0")
    a, g, N = approx.alpha, approx.gamma, approx.N
    nodes = approx.nodes[:, None]
    shift = g - a / 2
    out = np.empty((approx.j, x.size))
    four_n = 4.0 * N
    for s in range(0, x.size, CHUNK):
        sl = slice(s, s + CHUNK)
        xs = x[sl][None, :]
        qn, _, _ = weighted_value_and_derivative(a, x[sl], N)
        diff = xs - nodes
        near = np.abs(diff) < 1e-10 * np.maximum(nodes, 1.0)
        safe = np.where(near, 1.0, diff)
        R = qn[None, :] / (approx.weighted_deriv[:, None] * safe)
        R *= (four_n - xs) / (four_n - nodes)
        R *= (xs / nodes) ** shift
        # l_k -> 1 at its own node; the weight ratio is kept exactly
        limit = (xs / nodes) ** g * np.exp(-(xs - nodes) / 2)
        R = np.where(near, limit, R)
        # l_k(x_i) = delta_ki exactly, whatever roundoff q_N(x_i) carries
        hit = (diff == 0).any(axis=0)
        R[:, hit] = (diff[:, hit] == 0).astype(float)
        out[:, sl] = R
    return out


def _near_nodes(approx, x):
    nodes = approx.nodes
    i = np.searchsorted(nodes, x)
    lo = nodes[np.clip(i - 1, 0, nodes.size - 1)]
    hi = nodes[np.clip(i, 0, nodes.size - 1)]
    gap = np.minimum(np.abs(x - lo) / np.maximum(lo, 1.0), np.abs(x - hi) / np.maximum(hi, 1.0))
    return gap < 1e-10


def eval_lagrange(approx, x, weighted=True):
    """Evaluate ``L*(x) u(x)`` (``weighted=True``) or ``L*(x)`` at points ``x >= 0``."""
    x = check_points(x, "x")
    out = np.empty(x.size)
    pos = x > 0
    e = approx.kernel_coeffs
    four_n = 4.0 * approx.N
    xs = x[pos]
    if weighted:
        out[pos] = (four_n - xs) * _basis_sum(approx.alpha, e, xs, lambda t: _log_u(approx.gamma, t))
    else:
        hw = _half_log_w(approx.alpha, xs)
        with np.errstate(over="ignore"):
            scale = np.exp(-hw)
        if not np.all(np.isfinite(scale)):
            bad = xs[~np.isfinite(scale)][0]
            raise RepresentabilityError(f"unweighted value not representable at x={bad}")
        s = _basis_sum(approx.alpha, e, xs, lambda t: _half_log_w(approx.alpha, t))
        out[pos] = (four_n - xs) * s * scale
    if (~pos).any():
        v0 = four_n * float(e @ polynomials_at_zero(approx.alpha, len(e) - 1))
        out[~pos] = v0 if (not weighted or approx.gamma == 0) else 0.0
    # inside the node guard the derivative form is exact to first order
    near = pos & _near_nodes(approx, x)
    if near.any():
        v = approx.node_values_u @ lagrange_fundamental_matrix(approx, x[near])
        out[near] = v if weighted else v / u_weight(approx.gamma, x[near])
    return out


def eval_lagrange_fundamental(approx, x):
    """``L*(x) u(x)`` through the derivative form of ``l_k``: the independent evaluation path."""
    x = check_points(x, "x")
    if np.any(x <= 0):
        raise ValueError("x must be > 0")
    return approx.node_values_u @ lagrange_fundamental_matrix(approx, x)


def build_pair(alpha, gamma, n, m, rho, func=None, weighted_func=None):
    """Convenience: rule, truncation, filter and both approximants for one ``(n, m)``."""
    rule = build_gauss_rule(alpha, n)
    trunc = truncation_index(rule, rho)
    g = weighted_samples(func, alpha, rule.nodes[: trunc.j], weighted_func)
    filt = vp_filter(n, m)
    return build_vp_approximant(rule, trunc, filt, g, gamma), build_lagrange(rule, trunc, g, gamma)


__all__ = [
    "CHUNK",
    "LagrangeApproximant",
    "RepresentabilityError",
    "TruncationParams",
    "VPApproximant",
    "VPFilter",
    "build_lagrange",
    "build_pair",
    "build_vp_approximant",
    "discrete_cesaro",
    "discrete_fourier_coefficients",
    "eval_lagrange",
    "eval_lagrange_fundamental",
    "eval_vp",
    "eval_vp_kernel",
    "lagrange_fundamental_matrix",
    "u_weight",
    "vp_filter",
    "vp_fundamental",
    "vp_fundamental_matrix",
    "weighted_samples",
]

