import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from vplaguerre.basis import weighted_basis_matrix, weighted_value_and_derivative
from vplaguerre.quadrature import (
    TruncationParams,
    build_gauss_rule,
    tridiagonal_ql,
    truncated_quadrature,
    truncation_index,
)
from vplaguerre.validation import ConvergenceError

S2 = math.sqrt(2.0)


def test_one_point_rule():
    rule = build_gauss_rule(0.0, 1)
    assert rule.nodes.tolist() == pytest.approx([1.0], abs=1e-15)
    assert rule.christoffel.tolist() == pytest.approx([1.0], abs=1e-15)


def test_two_point_rule_analytic():
    rule = build_gauss_rule(0.0, 2)
    np.testing.assert_allclose(rule.nodes, [2 - S2, 2 + S2], atol=1e-13, rtol=0)
    np.testing.assert_allclose(rule.christoffel, [(2 + S2) / 4, (2 - S2) / 4], atol=1e-13, rtol=0)
    np.testing.assert_allclose(rule.golub_welsch, rule.christoffel, atol=1e-13)


def test_total_mass_alpha_half():
    rule = build_gauss_rule(0.5, 5)
    assert rule.christoffel.sum() == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-13)


@pytest.mark.parametrize("alpha", [-0.4, 0.0, 0.5, 0.6])
@pytest.mark.parametrize("n", [1, 2, 3, 8, 15, 25])
def test_exactness(alpha, n):
    rule = build_gauss_rule(alpha, n)
    for p in range(2 * n):
        exact = math.gamma(p + alpha + 1)
        approx = rule.integrate(rule.nodes**p)
        assert abs(approx - exact) / exact < 1e-10, (p, approx, exact)


@pytest.mark.parametrize("alpha", [-0.7, 0.0, 1.3])
@pytest.mark.parametrize("n", [10, 60, 100])
def test_agrees_with_scipy(alpha, n):
    x, w = special.roots_genlaguerre(n, alpha)
    rule = build_gauss_rule(alpha, n)
    np.testing.assert_allclose(rule.nodes, x, rtol=1e-12)
    big = w > 1e-250
    np.testing.assert_allclose(rule.christoffel[big], w[big], rtol=1e-9)


@pytest.mark.parametrize("alpha", [-0.4, 0.0, 0.5])
@pytest.mark.parametrize("n", [3, 20, 60, 100])
def test_interlacing(alpha, n):
    a = build_gauss_rule(alpha, n).nodes
    b = build_gauss_rule(alpha, n + 1).nodes
    assert np.all(b[:-1] < a) and np.all(a < b[1:])


@pytest.mark.parametrize("alpha", [-0.4, 0.0, 2.0])
@pytest.mark.parametrize("n", [5, 100, 1000])
def test_node_bounds_and_newton_idempotence(alpha, n):
    rule = build_gauss_rule(alpha, n)
    x = rule.nodes
    assert np.all(np.diff(x) > 0) and x[0] > 0
    assert x[-1] < 4 * n + 2 * alpha + 2
    _, _, ratio = weighted_value_and_derivative(alpha, x, n)
    # absolute accuracy of q_n near the origin limits tiny nodes to ~1e-15
    assert np.all(np.abs(ratio) < 1e-13 * np.maximum(x, 1.0))


@pytest.mark.parametrize("alpha,n", [(-0.4, 1000), (0.5, 300)])
def test_smallest_nodes_against_mpmath(alpha, n):
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 40
    rule = build_gauss_rule(alpha, n)
    for k in (0, 1, n // 2):
        x0 = rule.nodes[k]
        ref = mpmath.findroot(lambda t: mpmath.laguerre(n, alpha, t) * mpmath.exp(-t / 2), mpmath.mpf(x0), verify=False)
        assert abs(float((x0 - ref) / ref)) < 1e-11


@pytest.mark.parametrize("alpha", [-0.4, 0.0, 0.5])
@pytest.mark.parametrize("n", [10, 120, 800])
def test_stabilized_matches_direct_where_representable(alpha, n):
    rule = build_gauss_rule(alpha, n)
    w = rule.nodes**alpha * np.exp(-rule.nodes)
    ok = w > 1e-280
    # direct path: 1 / sum p_i^2 with the unweighted recurrence (fine while p_i is representable)
    Q = weighted_basis_matrix(alpha, rule.nodes[ok], n - 1, log_weight=0.0)
    direct = 1.0 / np.sum(Q**2, axis=0)
    rel = np.abs(rule.stabilized_christoffel[ok] * w[ok] - direct) / direct
    assert np.max(rel) < 1e-11


@pytest.mark.parametrize("alpha", [-0.4, 0.5])
@pytest.mark.parametrize("n", [20, 200])
def test_golub_welsch_cross_check(alpha, n):
    rule = build_gauss_rule(alpha, n)
    np.testing.assert_allclose(rule.golub_welsch, rule.christoffel, rtol=0, atol=1e-12)
    assert rule.christoffel.sum() == pytest.approx(math.gamma(alpha + 1), rel=1e-12)


def test_underflow_sentinel():
    rule = build_gauss_rule(0.0, 400)
    tail = rule.nodes > 760
    assert tail.any()
    assert np.all(rule.christoffel[tail] == 0.0)
    assert np.all(np.isfinite(rule.stabilized_christoffel)) and np.all(rule.stabilized_christoffel > 0)
    assert np.all(np.isfinite(rule.weighted_deriv))


@pytest.mark.parametrize("alpha", [-0.4, 0.0, 0.5, 0.6])
@pytest.mark.parametrize("n", [20, 100, 620])
@pytest.mark.parametrize("rho", [0.1, 0.25, 0.5])
def test_lambda_hat_tracks_spacing(alpha, n, rho):
    rule = build_gauss_rule(alpha, n)
    j = truncation_index(rule, rho).j
    dx = np.diff(rule.nodes)[: min(j, n - 1)]
    ratio = rule.stabilized_christoffel[: dx.size] / dx
    assert np.all((ratio >= 0.1) & (ratio <= 10))


def test_rule_is_immutable_and_cached():
    a = build_gauss_rule(0.5, 30)
    assert build_gauss_rule(0.5, 30) is a
    with pytest.raises(ValueError):
        a.nodes[0] = 1.0


def test_rule_validation():
    with pytest.raises(ValueError, match="alpha"):
        build_gauss_rule(-1.5, 4)
    with pytest.raises(ValueError):
        build_gauss_rule(0.0, 0)
    with pytest.raises(ValueError):
        build_gauss_rule(0.0, 6000)


def test_ql_reports_nonconvergence():
    d, off = np.arange(1.0, 11.0), np.ones(9)
    with pytest.raises(ConvergenceError, match="index"):
        tridiagonal_ql(d, off, max_iter=1)


def test_ql_matches_dense_eigensolver(rng):
    d = rng.normal(size=30)
    off = rng.normal(size=29)
    lam, z = tridiagonal_ql(d, off)
    T = np.diag(d) + np.diag(off, 1) + np.diag(off, -1)
    ref, vec = np.linalg.eigh(T)
    np.testing.assert_allclose(lam, ref, atol=1e-12)
    np.testing.assert_allclose(z**2, vec[0] ** 2, atol=1e-12)


# --------------------------------------------------------------------------- truncation


def test_truncation_examples_n2():
    rule = build_gauss_rule(0.0, 2)
    assert truncation_index(rule, 0.1).j == 2
    assert truncation_index(rule, 1 - 1e-12).j == 2
    assert truncation_index(rule, 0.05).j == 1


def test_truncation_definition():
    rule = build_gauss_rule(0.5, 50)
    for rho in (0.01, 0.1, 0.3, 0.7):
        j = truncation_index(rule, rho).j
        assert rule.nodes[j - 1] >= 4 * 50 * rho
        assert j == 1 or rule.nodes[j - 2] < 4 * 50 * rho


@pytest.mark.parametrize("rho", [0.0, 1.0, -0.2, 1.5])
def test_truncation_rejects_rho(rho):
    with pytest.raises(ValueError, match="rho"):
        truncation_index(build_gauss_rule(0.0, 5), rho)


@settings(max_examples=50, deadline=None)
@given(r1=st.floats(1e-3, 0.999), r2=st.floats(1e-3, 0.999), n=st.integers(1, 80))
def test_truncation_monotone(r1, r2, n):
    rule = build_gauss_rule(0.2, n)
    lo, hi = sorted((r1, r2))
    j1, j2 = truncation_index(rule, lo).j, truncation_index(rule, hi).j
    assert 1 <= j1 <= j2 <= n


def test_truncated_quadrature_exact_cases():
    rule = build_gauss_rule(0.0, 6)
    full = TruncationParams(0.99, 6)
    assert truncated_quadrature(rule, full, np.ones(6)) == pytest.approx(1.0, rel=1e-13)
    assert truncated_quadrature(rule, full, rule.nodes) == pytest.approx(1.0, rel=1e-13)
    rule = build_gauss_rule(0.5, 9)
    assert truncated_quadrature(rule, TruncationParams(0.99, 9), np.ones(9)) == pytest.approx(math.gamma(1.5))


@pytest.mark.parametrize("n", [4, 9, 15])
def test_tail_vanishing_polynomial(n):
    # P vanishes on the dropped nodes, so truncated and full sums agree
    rule = build_gauss_rule(0.3, n)
    trunc = truncation_index(rule, 0.3)
    j = trunc.j
    P = np.prod(rule.nodes[:, None] - rule.nodes[None, j:], axis=1) * 0.7
    full = rule.integrate(P)
    part = truncated_quadrature(rule, trunc, P[:j])
    assert part == pytest.approx(full, rel=1e-10, abs=1e-12)


def test_truncated_quadrature_weighted_path():
    rule = build_gauss_rule(0.0, 500)
    trunc = truncation_index(rule, 0.9)
    x = rule.nodes[: trunc.j]
    # f(x) = e^{x/2}: f sqrt(w) = 1, integral of e^{-x/2} is 2
    val = truncated_quadrature(rule, trunc, weighted_samples=np.ones(trunc.j))
    assert np.isfinite(val)
    assert val == pytest.approx(2.0, rel=1e-6)
    with pytest.raises(ValueError):
        truncated_quadrature(rule, trunc, samples=np.ones(3))
    with pytest.raises(ValueError):
        truncated_quadrature(rule, trunc)
    assert x.size == trunc.j


def test_csv_dump():
    rule = build_gauss_rule(0.5, 5)
    text = rule.to_csv(j=4)
    lines = text.splitlines()
    assert lines[0] == "k,x_k,lambda_k,lambda_hat_k,weighted_deriv_k,used"
    assert len(lines) == 6
    assert [line.rsplit(",", 1)[1] for line in lines[1:]] == ["1", "1", "1", "1", "0"]
    x1 = float(lines[1].split(",")[1])
    assert x1 == rule.nodes[0]
    buf = io.StringIO()
    rule.to_csv(buf)
    assert buf.getvalue().startswith("k,x_k,lambda_k,lambda_hat_k,weighted_deriv_k\n")
