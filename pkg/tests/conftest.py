import numpy as np
import pytest

from circleflow import CircleFunction


def random_band_limited(rng, grid_size, n_modes, decay=0.4, include_mean=True):
    """Random function with modes <= n_modes and geometrically damped amplitudes."""
    a = np.zeros(grid_size // 2 + 1)
    b = np.zeros(grid_size // 2 + 1)
    damp = np.exp(-decay * np.arange(n_modes + 1))
    a[: n_modes + 1] = rng.normal(0.0, 1.0, n_modes + 1) * damp
    if not include_mean:
        a[0] = 0.0
    b[1 : n_modes + 1] = rng.normal(0.0, 1.0, n_modes) * damp[1:]
    return CircleFunction.from_coefficients(a, b)


def quadrature_norms(f, k, oversample=32):
    """Trapezoid-rule oracle for the L2 and H^k norms on a fine grid.

    Periodic trapezoid = plain mean under the normalized measure; kept
    independent of the coefficient formulas it is used to check.
    """
    dense = f.dense_values(oversample)
    l2_sq = float(np.mean(dense**2))
    dk = f.derivative(k).dense_values(oversample) if k > 0 else dense
    dk_sq = float(np.mean(dk**2))
    return np.sqrt(l2_sq), np.sqrt(l2_sq + dk_sq)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
