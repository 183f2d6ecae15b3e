"""Input validation helpers shared by the library, the estimators and the CLI."""

import math
import numbers

import numpy as np
from sklearn.utils import check_array


class ConvergenceError(RuntimeError):
    """Raised when an iterative numerical routine fails to converge."""


def check_alpha(alpha):
    if not isinstance(alpha, numbers.Real) or not math.isfinite(alpha):
        raise ValueError(f"alpha must be a finite real number, got {alpha!r}")
    if alpha <= -1:
        raise ValueError(f"alpha must satisfy alpha > -1, got {alpha}")
    return float(alpha)


def check_gamma(gamma):
    if not isinstance(gamma, numbers.Real) or not math.isfinite(gamma):
        raise ValueError(f"gamma must be a finite real number, got {gamma!r}")
    if gamma < 0:
        raise ValueError(f"gamma must satisfy gamma >= 0, got {gamma}")
    return float(gamma)


def check_order(n, name="n", minimum=1, maximum=None):
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise ValueError(f"{name} must be an integer, got {n!r}")
    n = int(n)
    if n < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {n}")
    if maximum is not None and n > maximum:
        raise ValueError(f"{name} must be <= {maximum}, got {n}")
    return n


def check_rho(rho):
    if not isinstance(rho, numbers.Real) or not 0 < rho < 1:
        raise ValueError(f"rho must lie in the open interval (0, 1), got {rho!r}")
    return float(rho)


def check_localization(n, m):
    """Validate the VP localization parameter: ``0 < m < n``."""
    if isinstance(m, bool) or not isinstance(m, numbers.Integral):
        raise ValueError(f"m must be an integer, got {m!r}")
    if not 0 < m < n:
        raise ValueError(f"m must satisfy 0 < m < n (n={n}), got m={m}")
    return int(m)


def check_theta(theta):
    if not isinstance(theta, numbers.Real) or not 0 < theta < 1:
        raise ValueError(f"theta must lie in the open interval (0, 1), got {theta!r}")
    return float(theta)


def check_points(X, name="X"):
    """Coerce evaluation points to a 1-d float array of finite values >= 0.

    Accepts scalars, 1-d sequences and single-column 2-d arrays, the latter so
    estimators can be fed sklearn-style ``(n_samples, 1)`` inputs.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 0:
        X = X.reshape(1)
    elif X.ndim == 2:
        X = check_array(X, ensure_2d=True, ensure_min_samples=1, input_name=name)
        if X.shape[1] != 1:
            raise ValueError(f"{name} must have a single feature column, got shape {X.shape}")
        X = X[:, 0]
    elif X.ndim != 1:
        raise ValueError(f"{name} must be 1-d or a single column, got {X.ndim} dims")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite values")
    if np.any(X < 0):
        raise ValueError(f"{name} must lie in [0, inf)")
    return X


def check_samples(values, expected, name="samples"):
    values = np.asarray(values, dtype=float).reshape(-1)
    if values.size != expected:
        raise ValueError(f"{name} has {values.size} entries, expected {expected}")
    if not np.all(np.isfinite(values)):
        raise ValueError(f"{name} contains non-finite values")
    return values
