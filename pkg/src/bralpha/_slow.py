"""Pure-numpy fallbacks for the pairwise hot loops.

Broadcasting is blocked over target nodes so memory stays bounded for
large N.  Same math (and branch structure) as ``_accel``; only the
summation order differs.
"""

import numpy as np

from .specfun import bessel_k1, bessel_k1_deficit

TWO_PI = 2.0 * np.pi

_BLOCK = 256

# Laurent coefficients: cot(z) - 1/z = -sum c_n z^(2n-1), |z| < pi.
# Truncation error below 1e-16 relative for |z| <= 0.35.
COT_REGULAR_COEFFS = np.array([
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

COT_SERIES_RADIUS2 = 0.1225  # |z| <= 0.35


def _cot_regular(z):
    """cot(z) - 1/z for complex z, |z| <= 0.35 (series branch)."""
    q = z * z
    s = np.zeros_like(z)
    for c in COT_REGULAR_COEFFS[::-1]:
        s = s * q + c
    return -z * s


def periodic_bralpha_pair(dx1, dx2, alpha, L, tail):
    """x1-periodic smoothed-kernel values for separation arrays.

    Near the diagonal (|pi w / L| <= 0.35) the singular image sum is
    split as [series of the regular cotangent part] + [smoothed
    free-space kernel of the reduced offset], which avoids the
    catastrophic cancellation of evaluating two large near-opposite
    terms; elsewhere the closed cotangent form is used with the
    cancellation-free denominator 2 (sinh^2 + sin^2).  Exactly
    antisymmetric either way.  Returns (ex, ey); zero on the lattice.
    """
    dx1 = dx1 - L * np.rint(dx1 / L)
    r2 = dx1 * dx1 + dx2 * dx2
    pos = r2 > 0.0
    zr = np.pi * dx1 / L
    zi = np.pi * dx2 / L
    rho2 = zr * zr + zi * zi
    ex = np.zeros_like(dx1)
    ey = np.zeros_like(dx1)

    near = pos & (rho2 <= COT_SERIES_RADIUS2)
    if near.any():
        s = _cot_regular(zr[near] + 1j * zi[near])
        r = np.sqrt(r2[near])
        f = bessel_k1_deficit(r / alpha) / (TWO_PI * alpha * r)
        ex[near] = s.imag / (2.0 * L) - dx2[near] * f
        ey[near] = s.real / (2.0 * L) + dx1[near] * f

    far = pos & ~near
    if far.any():
        zrf = zr[far]
        zif = zi[far]
        big = np.abs(zif) > 350.0
        with np.errstate(over="ignore", invalid="ignore"):
            # odd functions on |arg| with explicit signs: exact antisymmetry
            sh = np.sign(zif) * np.sinh(np.where(big, 0.0, np.abs(zif)))
            t = np.sign(zrf) * np.sin(np.abs(zrf))
            den = 2.0 * L * (sh * sh + t * t)
            exf = np.where(big, -np.sign(zif) / (2.0 * L), -sh * np.cosh(zif) / den)
            eyf = np.where(big, 0.0, t * np.cos(np.abs(zrf)) / den)
        ex[far] = exf
        ey[far] = eyf

    # Bessel image corrections; the reduced-offset (m = 0) one is already
    # folded into the smoothed kernel on the series branch
    rmax = tail * alpha
    mmax = int(rmax / L + 0.5)
    for m in range(-mmax, mmax + 1):
        x1m = dx1 + m * L
        rm = np.sqrt(x1m * x1m + dx2 * dx2)
        keep = (rm <= rmax) & pos
        if m == 0:
            keep &= ~near
        if not keep.any():
            continue
        g = np.zeros_like(rm)
        g[keep] = bessel_k1(rm[keep] / alpha) / (TWO_PI * alpha * rm[keep])
        ex -= -dx2 * g
        ey -= x1m * g
    return ex, ey


def velocity_direct(nodes, weights, alpha, delta, kind):
    n = nodes.shape[0]
    out = np.empty((n, 2))
    for s in range(0, n, _BLOCK):
        e = min(s + _BLOCK, n)
        dx = nodes[s:e, None, 0] - nodes[None, :, 0]
        dy = nodes[s:e, None, 1] - nodes[None, :, 1]
        r2 = dx * dx + dy * dy
        f = np.zeros_like(r2)
        pos = r2 > 0.0
        if kind == 1:
            r = np.sqrt(r2[pos])
            f[pos] = bessel_k1_deficit(r / alpha) / (TWO_PI * alpha * r)
        else:
            f[pos] = 1.0 / (TWO_PI * (r2[pos] + delta * delta))
        fw = f * weights[None, :]
        out[s:e, 0] = (-dy * fw).sum(axis=1)
        out[s:e, 1] = (dx * fw).sum(axis=1)
    return out


def velocity_periodic(nodes, dgamma, alpha, L, tail):
    # Same symmetric +-m pair ordering as the numba path: each pair sums
    # to an exact zero on configurations with odd symmetry.
    n = nodes.shape[0]
    ux = np.zeros(n)
    uy = np.zeros(n)
    x1 = nodes[:, 0]
    x2 = nodes[:, 1]
    for m in range(1, n // 2 + 1):
        exp_, eyp = periodic_bralpha_pair(
            x1 - np.roll(x1, -m), x2 - np.roll(x2, -m), alpha, L, tail
        )
        if 2 * m == n:
            ux += exp_
            uy += eyp
            break
        exm, eym = periodic_bralpha_pair(
            x1 - np.roll(x1, m), x2 - np.roll(x2, m), alpha, L, tail
        )
        ux += exp_ + exm
        uy += eyp + eym
    return np.column_stack([ux * dgamma, uy * dgamma])


def min_chord_over_gamma(nodes, gammas, gamma_period, L, mode):
    n = nodes.shape[0]
    best = np.inf
    for s in range(0, n, _BLOCK):
        e = min(s + _BLOCK, n)
        dg = np.abs(gammas[s:e, None] - gammas[None, :])
        if mode != 0:
            dg = np.minimum(dg, gamma_period - dg)
        dx = nodes[s:e, None, 0] - nodes[None, :, 0]
        dy = nodes[s:e, None, 1] - nodes[None, :, 1]
        if mode == 2:
            dx -= L * np.rint(dx / L)
        dist = np.sqrt(dx * dx + dy * dy)
        mask = dg > 0.0
        if mask.any():
            best = min(best, (dist[mask] / dg[mask]).min())
    return best


def holder_pair_max(values, gammas, gamma_period, wrap, beta):
    n = values.shape[0]
    best = 0.0
    for s in range(0, n, _BLOCK):
        e = min(s + _BLOCK, n)
        dg = np.abs(gammas[s:e, None] - gammas[None, :])
        if wrap:
            dg = np.minimum(dg, gamma_period - dg)
        diff = values[s:e, None, :] - values[None, :, :]
        dist = np.sqrt((diff * diff).sum(axis=-1))
        mask = dg > 0.0
        if mask.any():
            best = max(best, (dist[mask] / dg[mask] ** beta).max())
    return best
