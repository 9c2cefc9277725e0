"""Modified Bessel functions of the second kind, orders 0 and 1.

These are the only special functions the smoothed Biot-Savart kernels
need, so they are implemented here rather than pulled from a library:
the hot pairwise loops call the scalar forms from nopython code, and the
numpy fallback path uses the vectorized forms.

Evaluation scheme (both orders):

* ``x <= 2``  — ascending power series around the logarithmic singularity,

      K0(x) = -(log(x/2) + g) I0(x) + sum_{k>=1} H_k (x^2/4)^k / (k!)^2
      K1(x) = 1/x + log(x/2) I1(x) - (x/4) sum_{k>=0} (H_k + H_{k+1} - 2g)
                                                  (x^2/4)^k / (k! (k+1)!)

  with ``g`` the Euler-Mascheroni constant and ``H_k`` harmonic numbers.
  All partial sums are cancellation-free.

* ``x > 2``   — Chebyshev fit of the scaled function

      K(x) = exp(-x) / sqrt(x) * C(t),    t = 4/x - 1 in (-1, 1],

  with coefficients frozen below (regenerate with
  ``tools/gen_bessel_tables.py``; max relative error ~2e-16 on [2, 600]).

Once ``exp(-x)`` underflows the returned value is an exact ``0.0`` rather
than subnormal noise; far-field kernel truncation relies on that.
"""

import math

import numpy as np

from ._backend import jit_scalar

EULER_GAMMA = 0.5772156649015328606

_MIN_NORMAL = 2.2250738585072014e-308

# Chebyshev coefficients for exp(x)*sqrt(x)*K0(x) and exp(x)*sqrt(x)*K1(x)
# in t = 4/x - 1, valid for x >= 2 (generated by tools/gen_bessel_tables.py).
_K0_CHEB = np.array([
    1.2201515410329777273,
    -0.031448101311964500543,
    0.0015698838857300533749,
    -0.00012849549581627802638,
    0.000013949813718876499364,
    -1.8317555227191194848e-6,
    2.7668136394450150761e-7,
    -4.6604898976879476656e-8,
    8.5740340174142260858e-9,
    -1.6975345093890615156e-9,
    3.5773972814003284472e-10,
    -7.9574892444773970377e-11,
    1.8559491149549265550e-11,
    -4.5145978833745191751e-12,
    1.1403405882073442347e-12,
    -2.9800969231481783548e-13,
    8.0328907750683743694e-14,
    -2.2275133267462963604e-14,
    6.3400764762766459661e-15,
    -1.8485933779209071694e-15,
    5.5120559994043333649e-16,
    -1.6782311257549006383e-16,
    5.2103917776435541125e-17,
    -1.6475805939842632815e-17,
    5.3004337711773357710e-18,
    -1.7331712005821000278e-18,
    5.7551092028827293794e-19,
    -1.9390956053183554660e-19,
])

_K1_CHEB = np.array([
    1.3603130952422213347,
    0.10392373657681723844,
    -0.0028578168596227793868,
    0.00019521551847135163111,
    -0.000019361979741660829600,
    2.4064849478372171171e-6,
    -3.5019606030878125421e-7,
    5.7410841254500492923e-8,
    -1.0345762465678097027e-8,
    2.0150497551970346161e-9,
    -4.1903547593419255842e-10,
    9.2183151876053141258e-11,
    -2.1299678384277910216e-11,
    5.1396396734823435404e-12,
    -1.2891739609498229352e-12,
    3.3484196660522431201e-13,
    -8.9767051820101460692e-14,
    2.4771544242195986813e-14,
    -7.0198370892147688513e-15,
    2.0387031662398608799e-15,
    -6.0570472706430178228e-16,
    1.8380935752430454256e-16,
    -5.6894628491936483743e-17,
    1.7940510478863572914e-17,
    -5.7567444820733024503e-18,
    1.8778651901623267401e-18,
    -6.2216452873526091852e-19,
    2.0919125269831136552e-19,
])


@jit_scalar
def _clenshaw(coeffs, t):
    b1 = 0.0
    b2 = 0.0
    for i in range(len(coeffs) - 1, 0, -1):
        b1, b2 = 2.0 * t * b1 - b2 + coeffs[i], b1
    return t * b1 - b2 + coeffs[0]


@jit_scalar
def _k0_small(x):
    # x in (0, 2]
    q = 0.25 * x * x
    term = 1.0
    i0 = 1.0
    hsum = 0.0
    h = 0.0
    for k in range(1, 32):
        term *= q / (k * k)
        i0 += term
        h += 1.0 / k
        hsum += h * term
        if term < 1e-18 * i0:
            break
    return -(math.log(0.5 * x) + EULER_GAMMA) * i0 + hsum


@jit_scalar
def _k1_deficit_small(x):
    # 1/x - K1(x) for x in (0, 2]; both pieces below are regular at 0,
    # so no cancellation against the 1/x pole.
    q = 0.25 * x * x
    term = 1.0
    i1s = 1.0                    # sum q^k / (k! (k+1)!), so I1 = (x/2)*i1s
    p1 = -EULER_GAMMA            # psi(k+1)
    p2 = 1.0 - EULER_GAMMA       # psi(k+2)
    psum = p1 + p2
    for k in range(1, 32):
        term *= q / (k * (k + 1))
        i1s += term
        p1 += 1.0 / k
        p2 += 1.0 / (k + 1)
        psum += (p1 + p2) * term
        if term < 1e-18 * i1s:
            break
    return -math.log(0.5 * x) * (0.5 * x) * i1s + 0.25 * x * psum


@jit_scalar
def _k0_scalar(x):
    if x <= 2.0:
        return _k0_small(x)
    v = math.exp(-x) / math.sqrt(x) * _clenshaw(_K0_CHEB, 4.0 / x - 1.0)
    return v if v >= _MIN_NORMAL else 0.0


@jit_scalar
def _k1_scalar(x):
    if x <= 2.0:
        return 1.0 / x - _k1_deficit_small(x)
    v = math.exp(-x) / math.sqrt(x) * _clenshaw(_K1_CHEB, 4.0 / x - 1.0)
    return v if v >= _MIN_NORMAL else 0.0


@jit_scalar
def _k1_deficit_scalar(x):
    # 1/x - K1(x), stable for all x > 0
    if x <= 2.0:
        return _k1_deficit_small(x)
    return 1.0 / x - _k1_scalar(x)


def _clenshaw_array(coeffs, t):
    b1 = np.zeros_like(t)
    b2 = np.zeros_like(t)
    for i in range(len(coeffs) - 1, 0, -1):
        b1, b2 = 2.0 * t * b1 - b2 + coeffs[i], b1
    return t * b1 - b2 + coeffs[0]


def _small_series_arrays(x):
    # returns (i0, hsum, i1s, psum) of the ascending series, vectorized
    q = 0.25 * x * x
    term0 = np.ones_like(x)
    term1 = np.ones_like(x)
    i0 = np.ones_like(x)
    hsum = np.zeros_like(x)
    i1s = np.ones_like(x)
    p1 = -EULER_GAMMA
    p2 = 1.0 - EULER_GAMMA
    psum = np.full_like(x, p1 + p2)
    h = 0.0
    for k in range(1, 26):
        term0 = term0 * q / (k * k)
        i0 += term0
        h += 1.0 / k
        hsum += h * term0
        term1 = term1 * q / (k * (k + 1))
        i1s += term1
        p1 += 1.0 / k
        p2 += 1.0 / (k + 1)
        psum += (p1 + p2) * term1
    return i0, hsum, i1s, psum


def _eval_piecewise(x, small_func, cheb):
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    small = x <= 2.0
    if small.any():
        out[small] = small_func(x[small])
    big = ~small
    if big.any():
        xb = x[big]
        v = np.exp(-xb) / np.sqrt(xb) * _clenshaw_array(cheb, 4.0 / xb - 1.0)
        v[v < _MIN_NORMAL] = 0.0
        out[big] = v
    return out


def _k0_small_array(x):
    i0, hsum, _, _ = _small_series_arrays(x)
    return -(np.log(0.5 * x) + EULER_GAMMA) * i0 + hsum


def _k1_deficit_small_array(x):
    _, _, i1s, psum = _small_series_arrays(x)
    return -np.log(0.5 * x) * (0.5 * x) * i1s + 0.25 * x * psum


def _k1_small_array(x):
    return 1.0 / x - _k1_deficit_small_array(x)


def _validate_positive(x):
    arr = np.asarray(x, dtype=np.float64)
    if arr.size and not (arr > 0).all():
        raise ValueError("argument must be > 0 (K0 and K1 diverge at 0)")
    return arr


def bessel_k0(x):
    """K0(x) for x > 0; scalar in, scalar out; array in, array out.

    Accurate to a few ulp relative; returns exact 0.0 in the underflow
    regime (x beyond ~708).  Raises ValueError for x <= 0.
    """
    arr = _validate_positive(x)
    if arr.ndim == 0:
        return _k0_scalar(float(arr))
    return _eval_piecewise(arr, _k0_small_array, _K0_CHEB)


def bessel_k1(x):
    """K1(x) for x > 0; same conventions as :func:`bessel_k0`."""
    arr = _validate_positive(x)
    if arr.ndim == 0:
        return _k1_scalar(float(arr))
    return _eval_piecewise(arr, _k1_small_array, _K1_CHEB)


def bessel_k1_deficit(x):
    """1/x - K1(x), evaluated without cancellation near x = 0.

    This combination is the whole smoothing content of the filtered
    kernel; computing it directly keeps the kernel accurate where the
    1/x pole and K1 nearly cancel.
    """
    arr = _validate_positive(x)
    if arr.ndim == 0:
        return _k1_deficit_scalar(float(arr))
    out = np.empty_like(arr)
    small = arr <= 2.0
    if small.any():
        out[small] = _k1_deficit_small_array(arr[small])
    big = ~small
    if big.any():
        out[big] = 1.0 / arr[big] - _eval_piecewise(
            arr[big], _k1_small_array, _K1_CHEB
        )
    return out
