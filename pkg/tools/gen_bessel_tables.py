"""Regenerate the frozen Chebyshev tables in bralpha/specfun.py.

For x > 2 the functions K0 and K1 are evaluated as

    K(x) = exp(-x) / sqrt(x) * C(t),   t = 4/x - 1  in (-1, 1],

where C(t) = sum_j c_j T_j(t) is fitted here against mpmath at 50-digit
precision.  Coefficients below 1e-19 are dropped; the resulting float64
evaluation is verified to a few ulp on a dense grid before printing.
"""

import mpmath as mp
import numpy as np

mp.mp.dps = 50


def cheb_fit(f, m=256, tol=mp.mpf("1e-19")):
    # Chebyshev interpolation at first-kind nodes, then truncate.
    nodes = [mp.cos(mp.pi * (j + mp.mpf(1) / 2) / m) for j in range(m)]
    vals = [f(t) for t in nodes]
    coeffs = []
    for k in range(m):
        s = mp.fsum(
            vals[j] * mp.cos(mp.pi * k * (j + mp.mpf(1) / 2) / m) for j in range(m)
        )
        coeffs.append(2 * s / m)
    coeffs[0] /= 2
    # truncate once the tail stays below tol
    last = m
    while last > 1 and abs(coeffs[last - 1]) < tol:
        last -= 1
    return coeffs[:last]


def scaled(order):
    def f(t):
        x = 4 / (t + 1)  # t in (-1, 1] <-> x in [2, inf)
        return mp.besselk(order, x) * mp.exp(x) * mp.sqrt(x)

    return f


def clenshaw(c, t):
    b1 = b2 = 0.0
    for ck in reversed(c[1:]):
        b1, b2 = 2.0 * t * b1 - b2 + ck, b1
    return t * b1 - b2 + c[0]


def verify(coeffs, order):
    c = [float(v) for v in coeffs]
    worst = 0.0
    for x in np.geomspace(2.0, 600.0, 4000):
        t = 4.0 / x - 1.0
        approx = clenshaw(c, t)
        exact = float(mp.besselk(order, mp.mpf(x)) * mp.exp(mp.mpf(x)) * mp.sqrt(mp.mpf(x)))
        worst = max(worst, abs(approx - exact) / exact)
    return worst


def dump(name, coeffs):
    print(f"{name} = np.array([")
    for v in coeffs:
        print(f"    {mp.nstr(v, 20, strip_zeros=False)},")
    print("])")


for order, name in ((0, "_K0_CHEB"), (1, "_K1_CHEB")):
    coeffs = cheb_fit(scaled(order))
    err = verify(coeffs, order)
    print(f"# {name}: {len(coeffs)} terms, max rel err {err:.3e} on [2, 600]")
    dump(name, coeffs)
