"""Error curves, Lebesgue functions/constants, Gibbs metrics and the test functions."""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .approximants import (
    CHUNK,
    LagrangeApproximant,
    VPApproximant,
    eval_lagrange,
    eval_vp,
    lagrange_fundamental_matrix,
    u_weight,
    vp_fundamental_matrix,
)
from .quadrature import build_gauss_rule, truncation_index
from .validation import check_order

# e^{x/2} is representable far beyond this; unweighted errors are only kept here.
UNWEIGHTED_LIMIT = 600.0


def default_threads():
    return os.cpu_count() or 1


def map_blocks(fn, x, threads=None):
    """Apply ``fn`` to consecutive CHUNK-sized blocks of ``x`` and concatenate.

    Block boundaries never depend on ``threads``, so results are bit-identical
    for any thread count.
    """
    x = np.asarray(x, dtype=float)
    blocks = [x[s : s + CHUNK] for s in range(0, x.size, CHUNK)]
    threads = default_threads() if threads is None else max(1, int(threads))
    if threads == 1 or len(blocks) <= 1:
        parts = [fn(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(fn, blocks))
    if not parts:
        return np.empty(0)
    return np.concatenate(parts, axis=-1)


# --------------------------------------------------------------------------- test functions


@dataclass(frozen=True)
class TestFunction:
    """One of the six benchmark functions with its default weight exponents."""

    id: int
    f: object
    alpha: float
    gamma: float
    weighted_f: object = None
    jump: float = None
    description: str = ""

    __test__ = False  # not a pytest class

    def __call__(self, x):
        return self.f(np.asarray(x, dtype=float))


def _f1(x):
    return np.exp(x / 4)


def _f1_weighted(alpha):
    def g(x):
        with np.errstate(divide="ignore"):
            return np.exp(x / 4 + 0.5 * (alpha * np.log(x) - x))

    return g


def _f2(x):
    return np.abs(x - 1) ** 5.5 / (100 + x**2)


def _f3(x):
    return 1 / (1 + 100 * (x - 3) ** 2)


def _f4(x):
    return np.abs(np.cos(np.pi - x))


def _f5(x):
    return 1 / (1 + 100 * (x - 0.5) ** 2) + 1 / (1 + 1000 * np.sqrt(x**2 + 0.5))


def _f6(x):
    return np.where(x < 1, x, x + 2)


def test_function(id):
    """Benchmark function ``f_id`` (1..6) with its default ``alpha`` and ``gamma``."""
    if id == 1:
        return TestFunction(1, _f1, -0.4, 0.05, _f1_weighted(-0.4), description="exp(x/4)")
    if id == 2:
        return TestFunction(2, _f2, 0.5, 0.5, description="|x-1|^(11/2)/(100+x^2)")
    if id == 3:
        return TestFunction(3, _f3, -0.4, 0.05, description="1/(1+100(x-3)^2)")
    if id == 4:
        return TestFunction(4, _f4, 0.6, 0.6, description="|cos(pi-x)|")
    if id == 5:
        return TestFunction(5, _f5, 0.0, 0.5, description="1/(1+100(x-1/2)^2)+1/(1+1000 sqrt(x^2+1/2))")
    if id == 6:
        return TestFunction(6, _f6, 0.5, 0.5, jump=1.0, description="x (x<1), x+2 (x>=1)")
    raise ValueError(f"test function id must be in 1..6, got {id!r}")


test_function.__test__ = False


def weighted_func_for(tf, alpha):
    """Closed-form ``f sqrt(w)`` for ``alpha`` when the function needs one (only ``f_1``)."""
    if tf.id == 1:
        return _f1_weighted(alpha)
    return None


def fu_values(tf, gamma, x):
    """``f(x) u(x)``, formed in log space for the exponentially growing ``f_1``."""
    x = np.asarray(x, dtype=float)
    if tf.id == 1:
        with np.errstate(divide="ignore"):
            return np.where(x > 0, np.exp(x / 4 + gamma * np.log(np.where(x > 0, x, 1)) - x / 2),
                            1.0 if gamma == 0 else 0.0)
    return tf(x) * u_weight(gamma, x)


# --------------------------------------------------------------------------- meshes


@dataclass(frozen=True)
class Mesh:
    points: np.ndarray = field(repr=False)
    a: float
    count: int


def uniform_mesh(a, count):
    """``count`` equispaced points in ``(0, a]``."""
    count = check_order(count, "count", minimum=2)
    if not (a > 0 and math.isfinite(a)):
        raise ValueError(f"mesh endpoint must be positive and finite, got {a}")
    pts = np.linspace(0.0, a, count + 1)[1:]
    return Mesh(points=pts, a=float(a), count=count)


def default_mesh(n, rho, count=10_000):
    return uniform_mesh(min(4 * n * rho, 50.0), count)


def lebesgue_mesh(nodes, right, refine=8):
    """Nodes plus ``refine`` interior points per gap, from ``x_1/2`` to ``right``.

    Past the last node the spacing of the final gap is kept until ``right``.
    """
    nodes = np.asarray(nodes, dtype=float)
    parts = [np.linspace(nodes[0] / 2, nodes[0], refine + 2)[:-1]]
    t = np.linspace(0.0, 1.0, refine + 2)[:-1]
    gaps = np.diff(nodes)
    parts.append((nodes[:-1, None] + gaps[:, None] * t[None, :]).ravel())
    last = nodes[-1]
    if right > last:
        step = (gaps[-1] if gaps.size else last) / (refine + 1)
        count = int(math.ceil((right - last) / step))
        parts.append(np.linspace(last, right, count + 1))
    else:
        parts.append(np.array([last]))
    return np.unique(np.concatenate(parts))


# --------------------------------------------------------------------------- errors


@dataclass(frozen=True)
class ErrorReport:
    """Pointwise errors of one approximant for one function on one mesh.

    ``unweighted_errors`` and ``values`` are NaN beyond ``UNWEIGHTED_LIMIT``.
    """

    mesh: np.ndarray = field(repr=False)
    weighted_errors: np.ndarray = field(repr=False)
    unweighted_errors: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    max_weighted: float
    operator: str
    function: str


def operator_tag(approx):
    if isinstance(approx, VPApproximant):
        return f"VP(n={approx.n},m={approx.m})"
    if isinstance(approx, LagrangeApproximant):
        return f"Lagrange(N={approx.N})"
    raise TypeError(f"unsupported approximant {type(approx).__name__}")


def weighted_eval(approx, x):
    if isinstance(approx, VPApproximant):
        return eval_vp(approx, x, weighted=True)
    if isinstance(approx, LagrangeApproximant):
        return eval_lagrange(approx, x, weighted=True)
    raise TypeError(f"unsupported approximant {type(approx).__name__}")


def error_curves(approx, fu, mesh, gamma=None, function="f", threads=None):
    """Weighted and unweighted errors of ``approx`` against reference values.

    Parameters
    ----------
    approx : VPApproximant or LagrangeApproximant
    fu : callable or ndarray
        ``f(x) u(x)`` on the mesh (callable receives the mesh points).
    mesh : Mesh or ndarray
    """
    x = mesh.points if isinstance(mesh, Mesh) else np.asarray(mesh, dtype=float)
    gamma = approx.gamma if gamma is None else gamma
    ref = np.asarray(fu(x) if callable(fu) else fu, dtype=float)
    if ref.shape != x.shape:
        raise ValueError("reference values do not match the mesh")
    aw = map_blocks(lambda b: weighted_eval(approx, b), x, threads)
    e = np.abs(aw - ref)
    u = u_weight(gamma, x)
    ok = (x <= UNWEIGHTED_LIMIT) & (u > 0)
    et = np.full(x.shape, np.nan)
    vals = np.full(x.shape, np.nan)
    et[ok] = e[ok] / u[ok]
    vals[ok] = aw[ok] / u[ok]
    return ErrorReport(
        mesh=x,
        weighted_errors=e,
        unweighted_errors=et,
        values=vals,
        max_weighted=float(np.max(e)) if e.size else 0.0,
        operator=operator_tag(approx),
        function=function,
    )


def fmt(v):
    return "" if v is None or not np.isfinite(v) else f"{v:.17g}"


def error_csv(vp_report, lag_report, stream=None):
    """CSV with columns ``x, e_vp, e_lag, etilde_vp, etilde_lag``."""
    if not np.array_equal(vp_report.mesh, lag_report.mesh):
        raise ValueError("reports were computed on different meshes")
    own = stream is None
    stream = io.StringIO() if own else stream
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["x", "e_vp", "e_lag", "etilde_vp", "etilde_lag"])
    for i, x in enumerate(vp_report.mesh):
        w.writerow(
            [
                fmt(x),
                fmt(vp_report.weighted_errors[i]),
                fmt(lag_report.weighted_errors[i]),
                fmt(vp_report.unweighted_errors[i]),
                fmt(lag_report.unweighted_errors[i]),
            ]
        )
    return stream.getvalue() if own else None


# --------------------------------------------------------------------------- Lebesgue


def lebesgue_function_vp(rule, filt, trunc, gamma, x):
    """``sum_{k<=j} |Phi_k(x)| u(x)/u(x_k)`` at points ``x > 0``."""
    return np.abs(vp_fundamental_matrix(rule, filt, trunc.j, x, gamma)).sum(axis=0)


def lebesgue_function_lagrange(approx_or_rule, trunc=None, gamma=None, x=None):
    """``sum_{k<=j} |l_k(x)| u(x)/u(x_k)`` for the truncated Lagrange operator.

    Accepts a built :class:`LagrangeApproximant` (samples are irrelevant) or a
    rule with its truncation and ``gamma``.
    """
    if isinstance(approx_or_rule, LagrangeApproximant):
        approx = approx_or_rule
    else:
        from .approximants import build_lagrange

        approx = build_lagrange(approx_or_rule, trunc, np.zeros(trunc.j), gamma)
    return np.abs(lagrange_fundamental_matrix(approx, x)).sum(axis=0)


def lebesgue_constant(operator, rule, gamma, rho, m=None, refine=8, threads=None):
    """Maximum of the Lebesgue function over a node-refined mesh.

    ``operator`` is ``"vp"`` (needs ``m``; mesh ``[x_1/2, 4(n+m)]``) or
    ``"lagrange"`` (``N = rule.n``; mesh ``[x_1/2, 4N]``).
    """
    from .approximants import build_lagrange, vp_filter

    trunc = truncation_index(rule, rho)
    if operator == "vp":
        if m is None:
            raise ValueError("the VP operator needs m")
        filt = vp_filter(rule.n, m)
        x = lebesgue_mesh(rule.nodes, 4.0 * (rule.n + m), refine)
        vals = map_blocks(lambda b: lebesgue_function_vp(rule, filt, trunc, gamma, b), x, threads)
    elif operator == "lagrange":
        approx = build_lagrange(rule, trunc, np.zeros(trunc.j), gamma)
        x = lebesgue_mesh(rule.nodes, 4.0 * rule.n, refine)
        vals = map_blocks(lambda b: lebesgue_function_lagrange(approx, x=b), x, threads)
    else:
        raise ValueError(f"operator must be 'vp' or 'lagrange', got {operator!r}")
    return float(np.max(vals))


@dataclass(frozen=True)
class LebesgueCurve:
    alpha: float
    gamma: float
    theta: float
    rho: float
    ns: tuple
    lambda_vp: tuple
    lambda_lag: tuple
    refine: int = 8

    def rows(self):
        for i, n in enumerate(self.ns):
            lv = self.lambda_vp[i] if self.lambda_vp else None
            ll = self.lambda_lag[i] if self.lambda_lag else None
            yield n, self.theta, lv, ll


def lebesgue_curve(alpha, gamma, ns, theta, rho, operators=("vp", "lagrange"), refine=8, threads=None):
    """Lebesgue constants for each ``n`` with ``m = floor(theta n)``."""
    lv, ll = [], []
    for n in ns:
        rule = build_gauss_rule(alpha, n)
        if "vp" in operators:
            m = max(1, int(math.floor(theta * n)))
            lv.append(lebesgue_constant("vp", rule, gamma, rho, m=m, refine=refine, threads=threads))
        if "lagrange" in operators:
            ll.append(lebesgue_constant("lagrange", rule, gamma, rho, refine=refine, threads=threads))
    return LebesgueCurve(alpha, gamma, theta, rho, tuple(ns), tuple(lv), tuple(ll), refine)


def lebesgue_csv(curves, stream=None):
    own = stream is None
    stream = io.StringIO() if own else stream
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["n", "theta", "lambda_vp", "lambda_lag"])
    for curve in curves:
        for n, theta, lv, ll in curve.rows():
            w.writerow([n, fmt(theta), fmt(lv), fmt(ll)])
    return stream.getvalue() if own else None


def log_fit(ns, values):
    """Least-squares ``c1 + c2 log n``; returns ``(c1, c2, r_squared)``."""
    ln = np.log(np.asarray(ns, dtype=float))
    y = np.asarray(values, dtype=float)
    A = np.column_stack([np.ones_like(ln), ln])
    (c1, c2), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ np.array([c1, c2])
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(c1), float(c2), r2


# --------------------------------------------------------------------------- Gibbs


@dataclass(frozen=True)
class GibbsComparison:
    """Overshoot near a jump and oscillation amplitude away from it, for two approximants."""

    overshoot_vp: float
    overshoot_lag: float
    far_amplitude_vp: float
    far_amplitude_lag: float

    @property
    def overshoot_difference(self):
        return self.overshoot_vp - self.overshoot_lag

    @property
    def far_amplitude_difference(self):
        return self.far_amplitude_vp - self.far_amplitude_lag


def _overshoot(report, f, jump, half_width, gap):
    x = report.mesh
    signed = report.values - f(x)
    left = (x >= jump - half_width) & (x <= jump - gap)
    right = (x >= jump + gap) & (x <= jump + half_width)
    # An upward jump pulls the approximant below f on the left and above f on the right.
    up = f(np.array([jump + 1e-12]))[0] >= f(np.array([jump - 1e-12]))[0]
    s = 1.0 if up else -1.0
    parts = [0.0]
    if left.any():
        parts.append(float(np.nanmax(-s * signed[left])))
    if right.any():
        parts.append(float(np.nanmax(s * signed[right])))
    return max(parts)


def far_amplitude(report, window):
    x = report.mesh
    sel = (x >= window[0]) & (x <= window[1])
    if not sel.any():
        raise ValueError(f"window {window} contains no mesh points")
    return float(np.nanmax(report.unweighted_errors[sel]))


def gibbs_metrics(report_vp, report_lag, f, jump, half_width=0.5, gap=0.02, far_window=(1.5, 3.0)):
    """Compare Gibbs overshoot and far-field oscillation of two error reports.

    The one-sided limits come from ``f`` itself, not from samples.
    """
    if not np.array_equal(report_vp.mesh, report_lag.mesh):
        raise ValueError("reports were computed on different meshes")
    return GibbsComparison(
        overshoot_vp=_overshoot(report_vp, f, jump, half_width, gap),
        overshoot_lag=_overshoot(report_lag, f, jump, half_width, gap),
        far_amplitude_vp=far_amplitude(report_vp, far_window),
        far_amplitude_lag=far_amplitude(report_lag, far_window),
    )
