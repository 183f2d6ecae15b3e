"""Drivers that regenerate the benchmark tables and figure data.

The shipped ``data/reproduce.json`` holds, for every table row, the
truncation parameters that make ``j`` equal the reference function-evaluation
counts (midpoints of the feasible ``rho`` intervals, see :func:`calibrate_rho`),
and for figure runs a cutoff abscissa from which ``rho = cutoff / (4 n)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .analysis import (
    error_curves,
    fu_values,
    gibbs_metrics,
    map_blocks,
    test_function,
    uniform_mesh,
    weighted_eval,
    weighted_func_for,
)
from .approximants import build_lagrange, build_vp_approximant, vp_filter, weighted_samples
from .quadrature import build_gauss_rule, truncation_index


def load_config():
    text = resources.files("vplaguerre").joinpath("data/reproduce.json").read_text()
    return json.loads(text)


def example_config(example):
    cfg = load_config()
    key = str(example)
    if key not in cfg["examples"]:
        raise ValueError(f"unknown example id {example!r}; expected 1..6")
    return cfg["examples"][key], cfg["mesh"]


def calibrate_rho(alpha, n, fevals):
    """Interval ``(lo, hi]`` of ``rho`` giving ``j = fevals``, and its midpoint."""
    nodes = build_gauss_rule(alpha, n).nodes
    if not 1 <= fevals <= n:
        raise ValueError(f"fevals must lie in 1..{n}")
    lo = nodes[fevals - 2] / (4 * n) if fevals >= 2 else 0.0
    hi = nodes[fevals - 1] / (4 * n) if fevals < n else 1.0
    return lo, min(hi, 1.0), 0.5 * (lo + min(hi, 1.0))


def figure_rho(cutoff, n):
    return min(cutoff / (4.0 * n), 0.99)


@dataclass
class Operators:
    """A VP approximant and the two Lagrange interpolants it is compared with."""

    vp: object
    lag_n: object
    lag_nm: object = None


def _build_lagrange(alpha, gamma, N, rho, tf):
    rule = build_gauss_rule(alpha, N)
    trunc = truncation_index(rule, rho)
    g = weighted_samples(tf, alpha, rule.nodes[: trunc.j], weighted_func_for(tf, alpha))
    return build_lagrange(rule, trunc, g, gamma)


def build_operators(tf, alpha, gamma, n, m, rho_vp, rho_lag=None):
    rule = build_gauss_rule(alpha, n)
    trunc = truncation_index(rule, rho_vp)
    g = weighted_samples(tf, alpha, rule.nodes[: trunc.j], weighted_func_for(tf, alpha))
    vp = build_vp_approximant(rule, trunc, vp_filter(n, m), g, gamma)
    lag_n = build_lagrange(rule, trunc, g, gamma)
    lag_nm = None if rho_lag is None else _build_lagrange(alpha, gamma, n + m - 1, rho_lag, tf)
    return Operators(vp, lag_n, lag_nm)


TABLE_COLUMNS = ["n", "m", "fevals_vp", "E_vp", "E_lag_n", "fevals_lag", "E_lag_nm"]


def table_row(tf, alpha, gamma, row, mesh, threads=None):
    ops = build_operators(tf, alpha, gamma, row["n"], row["m"], row["rho_vp"], row["rho_lag"])
    fu = fu_values(tf, gamma, mesh.points)
    return {
        "n": row["n"],
        "m": row["m"],
        "fevals_vp": ops.vp.j,
        "E_vp": error_curves(ops.vp, fu, mesh, threads=threads).max_weighted,
        "E_lag_n": error_curves(ops.lag_n, fu, mesh, threads=threads).max_weighted,
        "fevals_lag": ops.lag_nm.j,
        "E_lag_nm": error_curves(ops.lag_nm, fu, mesh, threads=threads).max_weighted,
    }


def reproduce_table(example, threads=None, rows=None):
    """Rows of the error table for ``example`` (1..4), in the reference column layout."""
    cfg, mesh_cfg = example_config(example)
    if not cfg["rows"]:
        raise ValueError(f"example {example} has no error table")
    tf = test_function(int(example))
    mesh = uniform_mesh(mesh_cfg["a"], mesh_cfg["count"])
    selected = cfg["rows"] if rows is None else [r for r in cfg["rows"] if r["n"] in rows]
    return [table_row(tf, cfg["alpha"], cfg["gamma"], r, mesh, threads) for r in selected]


def reproduce_figure(example, threads=None):
    """Figure data for ``example`` as ``{name: (header, columns)}``.

    Examples 1-4 give pointwise error curves of ``V_n^m`` and ``L*_{n+1}``;
    example 5 overlays ``f_5`` with both approximants; example 6 overlays
    ``f_6 u`` with the weighted VP polynomials for two values of ``m`` and the
    weighted Lagrange polynomial, plus error curves for the middle ``m``.
    """
    example = int(example)
    cfg, mesh_cfg = example_config(example)
    fig = cfg["figure"]
    tf = test_function(example)
    alpha, gamma = cfg["alpha"], cfg["gamma"]
    n, m = fig["n"], fig["m"]
    rho = figure_rho(cfg["cutoff"], n)
    step = mesh_cfg["a"] / mesh_cfg["count"]
    mesh = uniform_mesh(fig["window"], int(round(fig["window"] / step)))
    x = mesh.points
    fu = fu_values(tf, gamma, x)
    ops = build_operators(tf, alpha, gamma, n, m, rho)
    rep_vp = error_curves(ops.vp, fu, mesh, threads=threads)
    rep_lag = error_curves(ops.lag_n, fu, mesh, threads=threads)
    meta = {"n": n, "m": m, "rho": rho, "j": ops.vp.j, "alpha": alpha, "gamma": gamma}
    out = {}
    if example <= 4:
        out["errors"] = (
            ["x", "e_vp", "e_lag", "etilde_vp", "etilde_lag"],
            [x, rep_vp.weighted_errors, rep_lag.weighted_errors, rep_vp.unweighted_errors, rep_lag.unweighted_errors],
        )
    elif example == 5:
        out["overlay"] = (["x", "f", "vp", "lag"], [x, tf(x), rep_vp.values, rep_lag.values])
    else:
        cols = [x, fu]
        names = ["x", "fu"]
        for mm in fig["ms"]:
            other = build_operators(tf, alpha, gamma, n, mm, rho).vp
            cols.append(map_blocks(lambda b, a=other: weighted_eval(a, b), x, threads))
            names.append(f"vp_m{mm}_u")
        cols.append(map_blocks(lambda b: weighted_eval(ops.lag_n, b), x, threads))
        names.append("lag_u")
        out["overlay"] = (names, cols)
        out["errors"] = (
            ["x", "e_vp", "e_lag", "etilde_vp", "etilde_lag"],
            [x, rep_vp.weighted_errors, rep_lag.weighted_errors, rep_vp.unweighted_errors, rep_lag.unweighted_errors],
        )
        gm = gibbs_metrics(rep_vp, rep_lag, tf, tf.jump)
        meta.update(
            overshoot_vp=gm.overshoot_vp,
            overshoot_lag=gm.overshoot_lag,
            far_amplitude_vp=gm.far_amplitude_vp,
            far_amplitude_lag=gm.far_amplitude_lag,
        )
    return out, meta


__all__ = [
    "TABLE_COLUMNS",
    "build_operators",
    "calibrate_rho",
    "example_config",
    "figure_rho",
    "load_config",
    "reproduce_figure",
    "reproduce_table",
    "table_row",
]
