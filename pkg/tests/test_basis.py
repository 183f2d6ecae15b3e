import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vplaguerre.basis import (
    WeightPair,
    eval_weighted_basis,
    eval_weighted_basis_with_derivative,
    jacobi_matrix,
    polynomials_at_zero,
    recurrence_coefficients,
    weighted_basis_matrix,
)
from vplaguerre.quadrature import build_gauss_rule


@pytest.mark.parametrize(
    "alpha,k,expected",
    [(0.0, 0, (1.0, 0.0)), (0.0, 1, (3.0, 1.0)), (0.5, 2, (5.5, math.sqrt(5.0)))],
)
def test_recurrence_coefficients(alpha, k, expected):
    assert recurrence_coefficients(alpha, k) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("alpha", [-1.0, -3.0, float("nan")])
def test_recurrence_rejects_bad_alpha(alpha):
    with pytest.raises(ValueError, match="alpha"):
        recurrence_coefficients(alpha, 1)


def test_jacobi_matrix_layout():
    d, off = jacobi_matrix(0.5, 4)
    assert d.tolist() == [1.5, 3.5, 5.5, 7.5]
    np.testing.assert_allclose(off, [math.sqrt(1.5), math.sqrt(5.0), math.sqrt(10.5)])


def test_weight_pair_validation_and_ranges():
    with pytest.raises(ValueError):
        WeightPair(-1.0, 0.0)
    with pytest.raises(ValueError):
        WeightPair(0.0, -0.1)
    p = WeightPair(0.5, 0.5)
    assert p.in_vp_range and p.in_lagrange_range
    assert p.exponent_shift == 0.25
    edge = WeightPair(0.0, 1.25)
    assert not edge.in_vp_range and edge.in_lagrange_range
    assert not WeightPair(0.5, 1.43).in_vp_range


def test_sign_convention_at_zero():
    # positive leading coefficient gives p_i(0) = (-1)**i for alpha = 0
    row = eval_weighted_basis(0.0, 0.0, 2)
    np.testing.assert_allclose(row.values, [1.0, -1.0, 1.0], atol=1e-15)


def test_q0_at_one():
    row = eval_weighted_basis(0.0, 1.0, 0)
    assert row.values[0] == pytest.approx(math.exp(-0.5), rel=1e-15)


def test_derivative_degree_one_at_its_zero():
    value, deriv = eval_weighted_basis_with_derivative(0.0, 1.0, 1)
    assert abs(value) < 1e-16
    # p_1 = x - 1 here, so the derivative is +exp(-1/2)
    assert deriv == pytest.approx(math.exp(-0.5), rel=1e-14)


@pytest.mark.parametrize("x", [0.3, 2.0, 17.0])
def test_derivative_degree_zero(x):
    _, deriv = eval_weighted_basis_with_derivative(0.0, x, 0)
    assert deriv == pytest.approx(-0.5 * math.exp(-x / 2), rel=1e-14)


def test_positive_beyond_last_zero():
    rule = build_gauss_rule(0.3, 12)
    for x in (rule.nodes[-1] * 1.01, rule.nodes[-1] + 5):
        assert eval_weighted_basis(0.3, x, 12).values[-1] > 0


@pytest.mark.parametrize("alpha", [-0.4, 0.0, 0.5, 2.5])
def test_matches_classical_laguerre(alpha, p_oracle):
    x = np.linspace(0.05, 60.0, 37)
    Q = weighted_basis_matrix(alpha, x, 40)
    sqrt_w = np.exp(0.5 * (alpha * np.log(x) - x))
    for i in (0, 1, 2, 7, 25, 40):
        ref = p_oracle(alpha, i, x) * sqrt_w
        np.testing.assert_allclose(Q[i], ref, rtol=1e-9, atol=1e-12 * np.max(np.abs(ref)))


@pytest.mark.parametrize("alpha", [-0.4, 0.0, 0.5])
@pytest.mark.parametrize("n", [5, 20, 100])
def test_derivative_against_finite_difference(alpha, n):
    rule = build_gauss_rule(alpha, n)
    h = 1e-6
    for x in np.linspace(rule.nodes[0], rule.nodes[-1], 9):
        _, d = eval_weighted_basis_with_derivative(alpha, x, n)
        fd = (eval_weighted_basis(alpha, x + h, n).values[-1] - eval_weighted_basis(alpha, x - h, n).values[-1]) / (2 * h)
        scale = max(abs(d), np.max(np.abs(weighted_basis_matrix(alpha, [x], n))))
        assert abs(fd - d) <= 1e-6 * scale


@pytest.mark.parametrize("alpha", [-0.4, 0.0, 0.5, 3.0])
@pytest.mark.parametrize("n", [1, 2, 7, 15, 30])
def test_discrete_orthonormality(alpha, n):
    rule = build_gauss_rule(alpha, n)
    Q = weighted_basis_matrix(alpha, rule.nodes, n - 1)
    G = (Q * rule.stabilized_christoffel) @ Q.T
    np.testing.assert_allclose(G, np.eye(n), atol=1e-10)


@pytest.mark.parametrize("degree", [500, 2000, 4000])
def test_finite_at_large_degree(degree):
    x = np.linspace(1e-3, 4 * degree + 8, 301)
    Q = weighted_basis_matrix(0.5, x, degree)
    assert np.all(np.isfinite(Q))
    assert np.max(np.abs(Q)) < 10


def test_finite_at_zero_all_alphas():
    for alpha in (0.0, 0.7):
        assert np.all(np.isfinite(eval_weighted_basis(alpha, 0.0, 4000).values))
    assert np.all(eval_weighted_basis(0.7, 0.0, 5).values == 0)


def test_negative_alpha_at_zero_is_signed_infinity():
    vals = eval_weighted_basis(-0.4, 0.0, 3).values
    assert np.all(np.isinf(vals))
    assert np.all(np.sign(vals) == [1, -1, 1, -1])


def test_continuity_at_tiny_x():
    at0 = eval_weighted_basis(0.0, 0.0, 50).values
    tiny = eval_weighted_basis(0.0, 1e-300, 50).values
    np.testing.assert_allclose(tiny, at0, rtol=1e-8)


def test_polynomials_at_zero_match_closed_form():
    # p_i(0) = (-1)^i sqrt(Gamma(i+alpha+1) / (i! Gamma(alpha+1)^2))
    alpha = 1.5
    vals = polynomials_at_zero(alpha, 10)
    i = np.arange(11)
    ref = (-1.0) ** i * np.exp(
        0.5 * (np.array([math.lgamma(k + alpha + 1) - math.lgamma(k + 1) for k in i]) - 2 * math.lgamma(alpha + 1))
    )
    np.testing.assert_allclose(vals, ref, rtol=1e-13)


def test_degree_cap_and_bad_points():
    with pytest.raises(ValueError, match="cap"):
        eval_weighted_basis(0.0, 1.0, 6000)
    with pytest.raises(ValueError):
        eval_weighted_basis(0.0, -1.0, 3)
    with pytest.raises(ValueError):
        eval_weighted_basis(0.0, float("inf"), 3)
    with pytest.raises(ValueError):
        eval_weighted_basis_with_derivative(0.0, 0.0, 3)


@settings(max_examples=60, deadline=None)
@given(
    alpha=st.floats(-0.95, 5.0),
    x=st.floats(1e-6, 3000.0),
    degree=st.integers(0, 600),
)
def test_basis_always_finite(alpha, x, degree):
    Q = weighted_basis_matrix(alpha, [x], degree)
    assert np.all(np.isfinite(Q))


@settings(max_examples=40, deadline=None)
@given(alpha=st.floats(-0.9, 4.0), x=st.floats(0.01, 80.0))
def test_three_term_recurrence_holds(alpha, x):
    q = weighted_basis_matrix(alpha, [x], 12)[:, 0]
    for i in range(1, 12):
        a, b = recurrence_coefficients(alpha, i)
        _, b1 = recurrence_coefficients(alpha, i + 1)
        lhs = b1 * q[i + 1]
        rhs = (x - a) * q[i] - b * q[i - 1]
        assert abs(lhs - rhs) <= 1e-10 * (1 + abs(x)) * max(1e-300, np.max(np.abs(q)))
