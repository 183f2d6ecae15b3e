"""Gauss-Laguerre rules, the truncation index and truncated quadrature.

Nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix, found by
implicit QL with Wilkinson shifts and then polished by Newton steps on the
weighted polynomial.  Christoffel numbers are kept in two forms: the plain
``lambda_k`` (which underflows once ``x_k`` passes ~745) and the stabilized
``lambda_k / w(x_k) = 1 / sum_i q_i(x_k)**2`` that never forms ``w``.
"""

from __future__ import annotations

import csv
import functools
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .basis import DEGREE_CAP, jacobi_matrix, weighted_basis_matrix, weighted_value_and_derivative
from .validation import ConvergenceError, check_alpha, check_order, check_rho

_EPS = np.finfo(float).eps


def tridiagonal_ql(diag, offdiag, max_iter=None):
    """Eigenvalues and first eigenvector components of a symmetric tridiagonal matrix.

    Implicit QL with Wilkinson-type shifts.  Only the first row of the
    eigenvector matrix is accumulated, which is all Golub-Welsch needs, so the
    cost is O(n) per sweep.

    Parameters
    ----------
    diag : array_like, shape (n,)
    offdiag : array_like, shape (n-1,)
        ``offdiag[i]`` couples rows ``i`` and ``i+1``.
    max_iter : int, optional
        Total QL sweep budget; defaults to ``50 * n``.

    Returns
    -------
    eigenvalues : ndarray, ascending
    first_components : ndarray
        First components of the matching unit eigenvectors.
    """
    d = [float(v) for v in diag]
    n = len(d)
    e = [float(v) for v in offdiag] + [0.0]
    if len(e) != n:
        raise ValueError("offdiag must have length len(diag) - 1")
    z = [0.0] * n
    if n:
        z[0] = 1.0
    budget = 50 * n if max_iter is None else max_iter
    used = 0
    hypot = math.hypot
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            used += 1
            if used > budget:
                raise ConvergenceError(
                    f"tridiagonal QL did not converge for eigenvalue index {l} "
                    f"within {budget} sweeps"
                )
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            deflated = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zf = z[i + 1]
                z[i + 1] = s * z[i] + c * zf
                z[i] = c * z[i] - s * zf
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    order = np.argsort(d, kind="stable")
    return np.asarray(d)[order], np.asarray(z)[order]


@dataclass(frozen=True)
class GaussRule:
    """n-point Gauss rule for ``w(x) = x**alpha exp(-x)``.

    Attributes
    ----------
    nodes : ndarray
        Zeros ``x_1 < ... < x_n`` of ``p_n``.
    christoffel : ndarray
        ``lambda_k``; exactly 0 where it is not representable.
    stabilized_christoffel : ndarray
        ``lambda_k / w(x_k)``.
    weighted_deriv : ndarray
        ``d/dx [p_n sqrt(w)]`` at each node.
    golub_welsch : ndarray
        ``Gamma(alpha+1) * z_k**2`` from the eigenvectors; an independent
        cross-check of ``christoffel`` that is only accurate in absolute terms.
    """

    alpha: float
    n: int
    nodes: np.ndarray = field(repr=False)
    christoffel: np.ndarray = field(repr=False)
    stabilized_christoffel: np.ndarray = field(repr=False)
    weighted_deriv: np.ndarray = field(repr=False)
    golub_welsch: np.ndarray = field(repr=False)

    def integrate(self, values):
        """Full-rule sum ``sum_k f(x_k) lambda_k``."""
        values = np.asarray(values, dtype=float)
        if values.shape != self.nodes.shape:
            raise ValueError(f"expected {self.n} samples, got {values.shape}")
        return float(np.dot(values, self.christoffel))

    def to_csv(self, stream=None, j=None):
        """Write ``k, x_k, lambda_k, lambda_hat_k, weighted_deriv_k`` rows (17 digits)."""
        own = stream is None
        stream = io.StringIO() if own else stream
        writer = csv.writer(stream, lineterminator="\n")
        header = ["k", "x_k", "lambda_k", "lambda_hat_k", "weighted_deriv_k"]
        if j is not None:
            header.append("used")
        writer.writerow(header)
        for k in range(self.n):
            row = [
                k + 1,
                f"{self.nodes[k]:.17g}",
                f"{self.christoffel[k]:.17g}",
                f"{self.stabilized_christoffel[k]:.17g}",
                f"{self.weighted_deriv[k]:.17g}",
            ]
            if j is not None:
                row.append(int(k < j))
            writer.writerow(row)
        return stream.getvalue() if own else None


@dataclass(frozen=True)
class TruncationParams:
    rho: float
    j: int


def _newton_polish(alpha, n, x, steps=3):
    for _ in range(steps):
        _, _, ratio = weighted_value_and_derivative(alpha, x, n)
        dx = np.where(np.isfinite(ratio), ratio, 0.0)
        x = x - dx
        if np.all(np.abs(dx) < 1e-14 * np.maximum(x, 1.0)):
            break
    return x


def stabilized_christoffel_numbers(alpha, nodes, n):
    """``lambda_k / w(x_k) = 1 / sum_{i<n} q_i(x_k)**2``."""
    Q = weighted_basis_matrix(alpha, nodes, n - 1)
    return 1.0 / np.einsum("ij,ij->j", Q, Q)


@functools.lru_cache(maxsize=64)
def _build(alpha, n):
    diag, off = jacobi_matrix(alpha, n)
    eig, z = tridiagonal_ql(diag, off)
    mu0 = math.gamma(alpha + 1.0)
    golub_welsch = mu0 * z**2
    nodes = _newton_polish(alpha, n, np.maximum(eig, np.finfo(float).tiny))
    if np.any(np.diff(nodes) <= 0) or nodes[0] <= 0:
        raise ConvergenceError(f"node refinement broke ordering for alpha={alpha}, n={n}")
    lam_hat = stabilized_christoffel_numbers(alpha, nodes, n)
    log_w = alpha * np.log(nodes) - nodes
    with np.errstate(under="ignore"):
        lam = lam_hat * np.exp(log_w)
    lam[~np.isfinite(lam)] = 0.0
    _, deriv, _ = weighted_value_and_derivative(alpha, nodes, n)
    for arr in (nodes, lam, lam_hat, deriv, golub_welsch):
        arr.setflags(write=False)
    return GaussRule(
        alpha=alpha,
        n=n,
        nodes=nodes,
        christoffel=lam,
        stabilized_christoffel=lam_hat,
        weighted_deriv=deriv,
        golub_welsch=golub_welsch,
    )


def build_gauss_rule(alpha, n, cap=DEGREE_CAP):
    """Construct (and cache) the n-point Gauss-Laguerre rule for exponent ``alpha``."""
    alpha = check_alpha(alpha)
    n = check_order(n, "n", minimum=1, maximum=cap)
    return _build(alpha, n)


def truncation_index(rule, rho):
    """Index of the last node used: ``j = min{k : x_k >= 4 n rho}`` (1-based)."""
    rho = check_rho(rho)
    k = int(np.searchsorted(rule.nodes, 4.0 * rule.n * rho, side="left"))
    return TruncationParams(rho=rho, j=min(k + 1, rule.n))


def truncated_quadrature(rule, trunc, samples=None, weighted_samples=None):
    """Truncated Gauss sum ``sum_{k<=j} f(x_k) lambda_k``.

    Pass either plain ``samples`` f(x_k), or ``weighted_samples``
    ``f(x_k) sqrt(w(x_k))`` for integrands whose product with the weight is
    moderate but whose raw values are not.
    """
    j = trunc.j
    if (samples is None) == (weighted_samples is None):
        raise ValueError("pass exactly one of samples or weighted_samples")
    if samples is not None:
        samples = np.asarray(samples, dtype=float)
        if samples.shape != (j,):
            raise ValueError(f"expected {j} samples, got shape {samples.shape}")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        lam = rule.christoffel[:j]
        if np.all(lam > 0):
            return float(np.dot(samples, lam))
        x = rule.nodes[:j]
        with np.errstate(divide="ignore"):
            weighted_samples = samples * np.exp(0.5 * (rule.alpha * np.log(x) - x))
    weighted_samples = np.asarray(weighted_samples, dtype=float)
    if weighted_samples.shape != (j,):
        raise ValueError(f"expected {j} samples, got shape {weighted_samples.shape}")
    x = rule.nodes[:j]
    with np.errstate(under="ignore"):
        sqrt_w = np.exp(0.5 * (rule.alpha * np.log(x) - x))
    return float(np.dot(weighted_samples * rule.stabilized_christoffel[:j], sqrt_w))
