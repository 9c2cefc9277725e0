"""numba kernels for the O(N^2) pairwise loops.

The outer loop over target nodes is a ``prange``; every target's inner
sum runs in a fixed j order, so results are bitwise independent of the
thread count.  kind codes: 1 = br_alpha, 2 = blob.
"""

import math

import numpy as np
from numba import njit, prange

from .specfun import _k1_deficit_scalar, _k1_scalar

TWO_PI = 2.0 * math.pi


@njit(cache=True, parallel=True)
def velocity_direct(nodes, weights, alpha, delta, kind):
    n = nodes.shape[0]
    out = np.empty((n, 2))
    d2 = delta * delta
    for i in prange(n):
        xi = nodes[i, 0]
        yi = nodes[i, 1]
        ux = 0.0
        uy = 0.0
        for j in range(n):
            dx = xi - nodes[j, 0]
            dy = yi - nodes[j, 1]
            r2 = dx * dx + dy * dy
            if r2 == 0.0:
                continue
            if kind == 1:
                r = math.sqrt(r2)
                f = _k1_deficit_scalar(r / alpha) / (TWO_PI * alpha * r)
            else:
                f = 1.0 / (TWO_PI * (r2 + d2))
            w = weights[j]
            ux += w * (-dy) * f
            uy += w * dx * f
        out[i, 0] = ux
        out[i, 1] = uy
    return out


# Laurent coefficients: cot(z) - 1/z = -sum c_n z^(2n-1); see _slow.py.
_COT_COEFFS = np.array([
    1.0 / 3.0,
    1.0 / 45.0,
    2.0 / 945.0,
    1.0 / 4725.0,
    2.0 / 93555.0,
    1382.0 / 638512875.0,
    4.0 / 18243225.0,
    3617.0 / 162820783125.0,
    87734.0 / 38979295480125.0,
    349222.0 / 1531329465290625.0,
])

_SERIES_RADIUS2 = 0.1225  # |pi w / L| <= 0.35


@njit(cache=True, inline="always")
def _periodic_pair(xi, yi, xj, yj, alpha, L, rmax, mmax):
    # One image-summed smoothed-kernel value.  Near the diagonal the
    # singular cotangent part is series-expanded around its pole so the
    # huge near-opposite terms never meet in floating point; the
    # remainder is the smoothed free-space kernel (cancellation-free via
    # the K1 deficit).  Elsewhere the closed form is used with the
    # stable denominator 2 (sinh^2 + sin^2).
    dx = xi - xj
    dy = yi - yj
    dx -= L * np.rint(dx / L)
    r2 = dx * dx + dy * dy
    if r2 == 0.0:
        return 0.0, 0.0
    zr = math.pi * dx / L
    zi = math.pi * dy / L
    near = zr * zr + zi * zi <= _SERIES_RADIUS2
    if near:
        z = complex(zr, zi)
        q = z * z
        s = 0.0j
        for idx in range(len(_COT_COEFFS) - 1, -1, -1):
            s = s * q + _COT_COEFFS[idx]
        s = -z * s
        r = math.sqrt(r2)
        f = _k1_deficit_scalar(r / alpha) / (TWO_PI * alpha * r)
        ex = s.imag / (2.0 * L) - dy * f
        ey = s.real / (2.0 * L) + dx * f
    elif abs(zi) > 350.0:
        ex = (-0.5 if zi > 0.0 else 0.5) / L
        ey = 0.0
    else:
        # odd functions taken on |arg| with explicit signs, so the
        # antisymmetry K(-dx) = -K(dx) is exact in floating point
        sh = math.sinh(abs(zi))
        if zi < 0.0:
            sh = -sh
        t = math.sin(abs(zr))
        if zr < 0.0:
            t = -t
        den = 2.0 * L * (sh * sh + t * t)
        ex = -sh * math.cosh(zi) / den
        ey = t * math.cos(abs(zr)) / den
    dy2 = dy * dy
    rmax2 = rmax * rmax
    for m in range(-mmax, mmax + 1):
        if near and m == 0:
            continue  # folded into the smoothed kernel above
        x1m = dx + m * L
        rm2 = x1m * x1m + dy2
        if rm2 <= rmax2:
            rm = math.sqrt(rm2)
            g = _k1_scalar(rm / alpha) / (TWO_PI * alpha * rm)
            ex -= -dy * g
            ey -= x1m * g
    return ex, ey


@njit(cache=True, parallel=True)
def velocity_periodic(nodes, dgamma, alpha, L, tail):
    # Symmetric pair ordering: the j = i+m and j = i-m contributions are
    # summed together, so configurations with odd symmetry (the flat
    # sheet) produce a velocity at rounding level instead of amplifiable
    # noise.  Circulation weights are uniform on a periodic sheet.
    n = nodes.shape[0]
    out = np.empty((n, 2))
    rmax = tail * alpha
    mmax = int(rmax / L + 0.5)
    for i in prange(n):
        xi = nodes[i, 0]
        yi = nodes[i, 1]
        ux = 0.0
        uy = 0.0
        for m in range(1, n // 2 + 1):
            jp = i + m
            if jp >= n:
                jp -= n
            jm = i - m
            if jm < 0:
                jm += n
            ex, ey = _periodic_pair(
                xi, yi, nodes[jp, 0], nodes[jp, 1], alpha, L, rmax, mmax
            )
            if jp != jm:
                ex2, ey2 = _periodic_pair(
                    xi, yi, nodes[jm, 0], nodes[jm, 1], alpha, L, rmax, mmax
                )
                ex += ex2
                ey += ey2
            ux += ex
            uy += ey
        out[i, 0] = ux * dgamma
        out[i, 1] = uy * dgamma
    return out


@njit(cache=True)
def min_chord_over_gamma(nodes, gammas, gamma_period, L, mode):
    # mode: 0 open, 1 closed (gamma wraps), 2 x1-periodic (gamma and x1 wrap)
    n = nodes.shape[0]
    best = np.inf
    for i in range(n - 1):
        xi = nodes[i, 0]
        yi = nodes[i, 1]
        gi = gammas[i]
        for j in range(i + 1, n):
            dg = abs(gammas[j] - gi)
            if mode != 0:
                alt = gamma_period - dg
                if alt < dg:
                    dg = alt
            if dg <= 0.0:
                continue
            dx = nodes[j, 0] - xi
            dy = nodes[j, 1] - yi
            if mode == 2:
                dx -= L * np.rint(dx / L)
            ratio = math.sqrt(dx * dx + dy * dy) / dg
            if ratio < best:
                best = ratio
    return best


@njit(cache=True)
def holder_pair_max(values, gammas, gamma_period, wrap, beta):
    n = values.shape[0]
    d = values.shape[1]
    best = 0.0
    for i in range(n - 1):
        gi = gammas[i]
        for j in range(i + 1, n):
            dg = abs(gammas[j] - gi)
            if wrap:
                alt = gamma_period - dg
                if alt < dg:
                    dg = alt
            if dg <= 0.0:
                continue
            s = 0.0
            for c in range(d):
                diff = values[j, c] - values[i, c]
                s += diff * diff
            ratio = math.sqrt(s) / dg**beta
            if ratio > best:
                best = ratio
    return best
