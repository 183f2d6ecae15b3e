import math

import numpy as np
import pytest
from scipy import special


def orthonormal_laguerre(alpha, i, x):
    """Independent oracle: p_i from the classical L_i^alpha with positive leading coefficient."""
    norm = math.exp(0.5 * (math.lgamma(i + alpha + 1) - math.lgamma(i + 1)))
    return (-1) ** i * special.eval_genlaguerre(i, alpha, x) / norm


@pytest.fixture
def p_oracle():
    return orthonormal_laguerre


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
