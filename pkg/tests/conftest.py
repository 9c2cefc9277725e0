import math

import numpy as np
import pytest
from scipy.integrate import quad


def k0_oracle(x: float) -> float:
    """K0 by adaptive quadrature of its integral representation
    int_1^inf e^(-x t) (t^2 - 1)^(-1/2) dt, after t = cosh(u)."""
    umax = math.acosh(1.0 + 60.0 / x)
    val, err = quad(
        lambda u: math.exp(-x * math.cosh(u)),
        0.0,
        umax,
        epsabs=0.0,
        epsrel=1e-13,
        limit=500,
    )
    return val


def k1_oracle(x: float) -> float:
    """K1 by adaptive quadrature of x int_1^inf e^(-x t) (t^2 - 1)^(1/2) dt,
    after t = cosh(u)."""
    umax = math.acosh(1.0 + 90.0 / x)
    val, err = quad(
        lambda u: math.exp(-x * math.cosh(u)) * math.sinh(u) ** 2,
        0.0,
        umax,
        epsabs=0.0,
        epsrel=1e-13,
        limit=500,
    )
    return x * val


def euler_periodic_reference(dx, L, m_max=2000):
    """Brute-force image sum of the singular kernel with two-level
    Richardson extrapolation of the 1/m tail (pairs decay like 1/m^2)."""

    def kernel(a, b):
        r2 = a * a + b * b
        return np.array([-b, a]) / (2.0 * np.pi * r2)

    def partial(m):
        s = kernel(dx[0], dx[1])
        for i in range(1, m + 1):
            s = s + kernel(dx[0] + i * L, dx[1]) + kernel(dx[0] - i * L, dx[1])
        return s

    s1, s2, s4 = partial(m_max), partial(2 * m_max), partial(4 * m_max)
    r1 = 2 * s2 - s1
    r2 = 2 * s4 - s2
    return (4 * r2 - r1) / 3.0


@pytest.fixture
def rng():
    return np.random.default_rng(20260811)
