"""Command-line interface: ``vplaguerre {rule,approx,lebesgue,reproduce}``.

Every CSV starts with ``#`` metadata lines (version and configuration echo)
followed by a header row.  A timestamp line is added unless ``--no-meta`` is
given, so that repeated runs can be compared byte for byte.

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    default_mesh,
    error_csv,
    error_curves,
    fmt,
    fu_values,
    lebesgue_csv,
    lebesgue_curve,
    test_function,
    uniform_mesh,
    weighted_func_for,
)
from .approximants import build_lagrange, build_vp_approximant, vp_filter, weighted_samples
from .basis import WeightPair
from .experiments import TABLE_COLUMNS, example_config, figure_rho, reproduce_figure, reproduce_table
from .quadrature import build_gauss_rule, truncation_index
from .validation import ConvergenceError, check_localization, check_theta

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3


class UsageError(ValueError):
    pass


def _header(meta, args):
    lines = [f"# vplaguerre {__version__}"]
    lines += [f"# {k}: {v}" for k, v in meta.items()]
    if not args.no_meta:
        lines.append(f"# generated: {datetime.now(timezone.utc).isoformat(timespec='seconds')}")
    return "\n".join(lines) + "\n"


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _columns_csv(names, columns):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for row in zip(*columns):
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def range_warnings(alpha, gamma):
    """Messages for weight pairs outside the known boundedness ranges."""
    pair = WeightPair(alpha, gamma)
    out = []
    if not pair.in_vp_range:
        out.append(
            f"(alpha, gamma) = ({alpha:g}, {gamma:g}) is outside the range "
            "max(alpha/2-1/4, 0) < gamma < min(alpha/2+7/6, alpha+1) guaranteeing bounded VP operators"
        )
    if not pair.in_lagrange_range:
        out.append(
            f"(alpha, gamma) = ({alpha:g}, {gamma:g}) is outside the range "
            "max(0, alpha/2+1/4) <= gamma <= alpha/2+5/4 guaranteeing logarithmic Lagrange growth"
        )
    return out


def _warn(alpha, gamma):
    for msg in range_warnings(alpha, gamma):
        print(f"warning: {msg}", file=sys.stderr)


def _resolve_m(n, m, theta):
    if m is None:
        m = max(1, int(math.floor(check_theta(theta) * n)))
    return check_localization(n, m)


# --------------------------------------------------------------------------- rule


def cmd_rule(args):
    rule = build_gauss_rule(args.alpha, args.n)
    meta = {"command": "rule", "alpha": fmt(rule.alpha), "n": rule.n}
    j = None
    if args.rho is not None:
        j = truncation_index(rule, args.rho).j
        meta.update(rho=fmt(args.rho), j=j)
    _emit(_header(meta, args) + rule.to_csv(j=j), args.out)
    return EXIT_OK


# --------------------------------------------------------------------------- approx


def _read_samples(path):
    xs, fs = [], []
    with open(path, encoding="utf-8") as fh:
        for row in csv.reader(line for line in fh if not line.lstrip().startswith("#")):
            if not row:
                continue
            try:
                x, f = float(row[0]), float(row[1])
            except (ValueError, IndexError):
                if xs:
                    raise UsageError(f"malformed sample row {row!r} in {path}") from None
                continue
            xs.append(x)
            fs.append(f)
    if not xs:
        raise UsageError(f"no samples found in {path}")
    return np.array(xs), np.array(fs)


def _match_nodes(rule, j, xs, path):
    nodes = rule.nodes[:j]
    if xs.size < j or not np.allclose(xs[:j], nodes, rtol=1e-10, atol=0):
        raise UsageError(
            f"{path} must list f at the first {j} zeros of p_{rule.n} (x_1={nodes[0]:.17g}, ...)"
        )


def cmd_approx(args):
    if (args.function is None) == (args.samples is None):
        raise UsageError("give exactly one of --function or --samples")
    tf = None
    if args.function is not None:
        tf = test_function(int(args.function.lstrip("f")))
    alpha = args.alpha if args.alpha is not None else (tf.alpha if tf else 0.0)
    gamma = args.gamma if args.gamma is not None else (tf.gamma if tf else 0.0)
    WeightPair(alpha, gamma)
    n = args.n
    m = _resolve_m(n, args.m, args.theta)
    _warn(alpha, gamma)

    rule = build_gauss_rule(alpha, n)
    trunc = truncation_index(rule, args.rho)
    lag_rule = build_gauss_rule(alpha, n + m - 1)
    lag_trunc = truncation_index(lag_rule, args.rho)
    if tf is not None:
        g = weighted_samples(tf, alpha, rule.nodes[: trunc.j], weighted_func_for(tf, alpha))
        if args.mesh_a is None:
            mesh = default_mesh(n, args.rho, args.mesh_count)
        else:
            mesh = uniform_mesh(args.mesh_a, args.mesh_count)
        x = mesh.points
        fu = fu_values(tf, gamma, x)
        label = f"f{tf.id}"
    else:
        xs, fs = _read_samples(args.samples)
        _match_nodes(rule, trunc.j, xs, args.samples)
        g = weighted_samples(lambda _: fs[: trunc.j], alpha, rule.nodes[: trunc.j])
        x = xs
        fu = fs * np.exp(gamma * np.log(xs) - xs / 2)
        mesh = None
        label = str(args.samples)

    vp = build_vp_approximant(rule, trunc, vp_filter(n, m), g, gamma)
    lag = build_lagrange(rule, trunc, g, gamma)
    rep_vp = error_curves(vp, fu, x, function=label, threads=args.threads)
    rep_lag = error_curves(lag, fu, x, function=label, threads=args.threads)
    summary = {
        "function": label,
        "alpha": alpha,
        "gamma": gamma,
        "n": n,
        "m": m,
        "rho": args.rho,
        "fevals_vp": trunc.j,
        "fevals_lag_n": trunc.j,
        "fevals_lag_nm": lag_trunc.j,
        "max_weighted": {},
    }
    if args.operator in ("vp", "both"):
        summary["max_weighted"]["vp"] = rep_vp.max_weighted
    if args.operator in ("lagrange", "both"):
        summary["max_weighted"]["lagrange_n"] = rep_lag.max_weighted
        if tf is not None:
            g2 = weighted_samples(tf, alpha, lag_rule.nodes[: lag_trunc.j], weighted_func_for(tf, alpha))
            lag2 = build_lagrange(lag_rule, lag_trunc, g2, gamma)
            summary["max_weighted"]["lagrange_nm"] = error_curves(
                lag2, fu, x, threads=args.threads
            ).max_weighted
    if args.operator == "vp":
        rep_lag = _blank(rep_lag)
    elif args.operator == "lagrange":
        rep_vp = _blank(rep_vp)

    meta = {
        "command": "approx",
        "function": label,
        "alpha": fmt(alpha),
        "gamma": fmt(gamma),
        "n": n,
        "m": m,
        "rho": fmt(args.rho),
        "j": trunc.j,
        "operator": args.operator,
        "mesh": f"uniform a={fmt(mesh.a)} count={mesh.count}" if mesh else "sample points",
    }
    _emit(_header(meta, args) + error_csv(rep_vp, rep_lag), args.out)
    text = json.dumps(summary, indent=2) + "\n"
    if args.summary:
        _emit(text, args.summary)
    elif args.out not in (None, "-"):
        sys.stdout.write(text)
    return EXIT_OK


def _blank(report):
    nan = np.full(report.mesh.shape, np.nan)
    return type(report)(report.mesh, nan, nan, nan, float("nan"), report.operator, report.function)


# --------------------------------------------------------------------------- lebesgue


def cmd_lebesgue(args):
    WeightPair(args.alpha, args.gamma)
    ops = {"vp": ("vp",), "lagrange": ("lagrange",), "both": ("vp", "lagrange")}[args.operator]
    for n in args.n:
        for th in args.theta:
            _resolve_m(n, None, th)
    _warn(args.alpha, args.gamma)
    curves = [
        lebesgue_curve(args.alpha, args.gamma, args.n, th, args.rho, ops, args.refine, args.threads)
        for th in args.theta
    ]
    meta = {
        "command": "lebesgue",
        "alpha": fmt(args.alpha),
        "gamma": fmt(args.gamma),
        "operator": args.operator,
        "rho": fmt(args.rho),
        "refine": args.refine,
    }
    _emit(_header(meta, args) + lebesgue_csv(curves), args.out)
    return EXIT_OK


# --------------------------------------------------------------------------- reproduce


def cmd_reproduce(args):
    cfg, mesh_cfg = example_config(args.example)
    if not (args.table or args.figure):
        args.table, args.figure = bool(cfg["rows"]), True
    out_dir = Path(args.out_dir)
    written = []
    base = {"command": "reproduce", "example": args.example, "alpha": fmt(cfg["alpha"]), "gamma": fmt(cfg["gamma"])}
    if args.table:
        rows = reproduce_table(args.example, threads=args.threads)
        meta = dict(base)
        meta["mesh"] = f"uniform a={fmt(mesh_cfg['a'])} count={mesh_cfg['count']}"
        meta["rho_vp"] = " ".join(fmt(r["rho_vp"]) for r in cfg["rows"])
        meta["rho_lag"] = " ".join(fmt(r["rho_lag"]) for r in cfg["rows"])
        body = _columns_csv(TABLE_COLUMNS, [[r[c] for r in rows] for c in TABLE_COLUMNS])
        path = out_dir / f"example{args.example}_table.csv"
        _emit(_header(meta, args) + body, path)
        written.append(path)
    if args.figure:
        data, info = reproduce_figure(args.example, threads=args.threads)
        meta = dict(base)
        meta.update({k: fmt(v) if isinstance(v, float) else v for k, v in info.items()})
        meta["cutoff"] = fmt(cfg["cutoff"])
        meta["rho_rule"] = f"cutoff/(4n) = {fmt(figure_rho(cfg['cutoff'], info['n']))}"
        for name, (names, cols) in data.items():
            path = out_dir / f"example{args.example}_figure_{name}.csv"
            _emit(_header(meta, args) + _columns_csv(names, cols), path)
            written.append(path)
    for p in written:
        print(p)
    return EXIT_OK


# --------------------------------------------------------------------------- parser


def _int_list(text):
    return [int(t) for t in text.replace(",", " ").split()]


def _float_list(text):
    return [float(t) for t in text.replace(",", " ").split()]


def build_parser():
    p = argparse.ArgumentParser(prog="vplaguerre", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--no-meta", action="store_true", help="omit the timestamp metadata line")
    common.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("rule", parents=[common], help="Gauss-Laguerre nodes and weights")
    r.add_argument("--alpha", type=float, required=True)
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--rho", type=float, default=None, help="also report the truncation index j")
    r.add_argument("--out", default=None)
    r.set_defaults(func=cmd_rule)

    a = sub.add_parser("approx", parents=[common], help="VP / Lagrange error curves")
    src = a.add_mutually_exclusive_group()
    src.add_argument("--function", choices=[f"f{i}" for i in range(1, 7)])
    src.add_argument("--samples", help="CSV of x,f(x) at the sampling nodes")
    a.add_argument("--alpha", type=float, default=None)
    a.add_argument("--gamma", type=float, default=None)
    a.add_argument("--n", type=int, required=True)
    loc = a.add_mutually_exclusive_group()
    loc.add_argument("--m", type=int, default=None)
    loc.add_argument("--theta", type=float, default=0.5)
    a.add_argument("--rho", type=float, default=0.25)
    a.add_argument("--mesh-a", type=float, default=None)
    a.add_argument("--mesh-count", type=int, default=10_000)
    a.add_argument("--operator", choices=["vp", "lagrange", "both"], default="both")
    a.add_argument("--out", default=None)
    a.add_argument("--summary", default=None, help="path for the JSON summary")
    a.set_defaults(func=cmd_approx)

    lb = sub.add_parser("lebesgue", parents=[common], help="Lebesgue constants versus n")
    lb.add_argument("--alpha", type=float, required=True)
    lb.add_argument("--gamma", type=float, required=True)
    lb.add_argument("--operator", choices=["vp", "lagrange", "both"], default="both")
    lb.add_argument("--n", type=_int_list, required=True, help="e.g. 100,200,300")
    lb.add_argument("--theta", type=_float_list, default=[0.5])
    lb.add_argument("--rho", type=float, default=0.25)
    lb.add_argument("--refine", type=int, default=8)
    lb.add_argument("--out", default=None)
    lb.set_defaults(func=cmd_lebesgue)

    rp = sub.add_parser("reproduce", parents=[common], help="regenerate table/figure data")
    rp.add_argument("--example", type=int, required=True)
    rp.add_argument("--table", action="store_true")
    rp.add_argument("--figure", action="store_true")
    rp.add_argument("--out-dir", default=".")
    rp.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
