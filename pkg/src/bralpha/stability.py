"""Linear stability of the flat uniform sheet.

Fourier modes (x2_hat, gamma_hat) of small flat-sheet perturbations obey
d/dt (x2_hat, gamma_hat) = M (x2_hat, gamma_hat) with

    M = [[0,                            (i/2) sgn(k) d(k)],
         [-(i/2) gamma0^2 k^2 sgn(k) d(k),              0]],

    d(k) = (1 + 1/(alpha^2 k^2))^(-1/2) - 1  in (-1, 0),

whose eigenvalues are +-(1/2) |gamma0| |k| |d(k)|: growth decays only
algebraically, like gamma0 / (4 alpha^2 k), at high wavenumber.  The blob
regularization damps exponentially instead, lambda = (1/2) e^(-delta k)
|gamma0| k, and the unsmoothed sheet grows like |gamma0| |k| / 2 at every
k (the classic ill-posedness).

The off-diagonal entries are Fourier transforms of the odd kernel
profile sgn(x1) DPsi_alpha(|x1|); ``verify_ft_identity`` checks that
transform by direct quadrature.
"""

import math

import numpy as np
from scipy.integrate import fixed_quad, quad
from scipy.special import sici

from .specfun import bessel_k1_deficit

TWO_PI = 2.0 * math.pi


def d_of_k(k, alpha):
    """Smoothing factor (1 + 1/(alpha^2 k^2))^(-1/2) - 1, in (-1, 0)."""
    if not alpha > 0:
        raise ValueError("alpha must be > 0")
    k_arr = np.asarray(k, dtype=np.float64)
    if (k_arr == 0).any():
        raise ValueError("d(k) is undefined at k = 0")
    val = 1.0 / np.sqrt(1.0 + 1.0 / (alpha * k_arr) ** 2) - 1.0
    return float(val) if np.ndim(k) == 0 else val


def br_alpha_growth_rate(k, gamma0, alpha):
    """Positive eigenvalue branch (1/2)|gamma0||k|(1 - (1+1/(a k)^2)^-1/2).

    Returns 0 at k = 0; decays like |gamma0|/(4 alpha^2 |k|) for large k
    and recovers the unsmoothed |gamma0||k|/2 as alpha -> 0.
    """
    if not alpha > 0:
        raise ValueError("alpha must be > 0")
    k_arr = np.asarray(k, dtype=np.float64)
    ak = alpha * k_arr
    with np.errstate(divide="ignore"):
        factor = np.where(
            k_arr == 0.0, 0.0, 1.0 - 1.0 / np.sqrt(1.0 + 1.0 / np.where(ak == 0, 1.0, ak) ** 2)
        )
    val = 0.5 * abs(gamma0) * np.abs(k_arr) * factor
    return float(val) if np.ndim(k) == 0 else val


def blob_growth_rate(k, gamma0, delta):
    """Blob-kernel growth rate (1/2) e^(-delta |k|) |gamma0| |k|."""
    if not delta > 0:
        raise ValueError("delta must be > 0")
    k_arr = np.asarray(k, dtype=np.float64)
    val = 0.5 * abs(gamma0) * np.abs(k_arr) * np.exp(-delta * np.abs(k_arr))
    return float(val) if np.ndim(k) == 0 else val


def euler_growth_rate(k, gamma0):
    """Unregularized growth rate |gamma0||k|/2 (formula only; the
    corresponding initial-value problem is ill-posed)."""
    k_arr = np.asarray(k, dtype=np.float64)
    val = 0.5 * abs(gamma0) * np.abs(k_arr)
    return float(val) if np.ndim(k) == 0 else val


def lagrangian_growth_rate(k, gamma0, alpha):
    """Growth rate of flat-sheet perturbations under the full linearized
    circulation-Lagrangian dynamics,

        (|gamma0| |k| / 2) sqrt((1 - A)(1 - B)),
        A = s / sqrt(1 + s^2),  B = (sqrt(1 + s^2) - 1) / s,  s = alpha k.

    This is what simulations of the smoothed sheet equation actually
    measure.  It exceeds :func:`br_alpha_growth_rate` (the closed-form
    single-coefficient rate, whose off-diagonal couplings are both
    k |d(k)|/2): linearizing the kernel integral gives the x1-response
    the multiplier int_0^k |d|/2 dkappa instead, because the displaced
    sheet also rides the shear of the smoothed base velocity profile
    (d u1 / d x2 = -gamma0/(2 alpha) on the sheet).  Both rates share the
    KH limit |gamma0||k|/2 as alpha -> 0; this one decays like
    k^(-1/2) at high wavenumber instead of k^(-1).
    """
    if not alpha > 0:
        raise ValueError("alpha must be > 0")
    k_arr = np.asarray(k, dtype=np.float64)
    s = alpha * np.abs(k_arr)
    with np.errstate(invalid="ignore", divide="ignore"):
        root = np.sqrt(1.0 + s * s)
        a = s / root
        b = (root - 1.0) / np.where(s == 0, 1.0, s)
        val = np.where(
            k_arr == 0.0,
            0.0,
            0.5 * abs(gamma0) * np.abs(k_arr) * np.sqrt((1.0 - a) * (1.0 - b)),
        )
    return float(val) if np.ndim(k) == 0 else val


def mode_matrix(k, gamma0, alpha) -> np.ndarray:
    """2x2 complex coefficient matrix of the Fourier-mode system."""
    if k == 0:
        raise ValueError("mode matrix is undefined at k = 0")
    d = d_of_k(k, alpha)
    s = 1.0 if k > 0 else -1.0
    top = 0.5j * s * d
    bottom = -0.5j * gamma0**2 * k**2 * s * d
    return np.array([[0.0, top], [bottom, 0.0]], dtype=complex)


def growing_eigenvector(k, gamma0, alpha):
    """Eigenvector (x2_hat, gamma_hat) of the growing mode, x2_hat = 1:
    gamma_hat = i sgn(k) |gamma0| |k|."""
    s = 1.0 if k > 0 else -1.0
    return np.array([1.0, 1j * s * abs(gamma0) * abs(k)], dtype=complex)


def verify_ft_identity(k, alpha, quadrature_tolerance: float = 1e-9) -> float:
    """Residual of the kernel-profile Fourier-transform identity.

    The transform of the odd profile sgn(x1) DPsi_alpha(|x1|) at
    wavenumber k is purely imaginary with magnitude |d(k)|/2; here the
    sine integral

        2 int_0^inf DPsi_alpha(x) sin(k x) dx

    is evaluated numerically and compared against |d(k)|/2.  (Under the
    e^{-ikx} transform convention that integral equals -Im F = +
    sgn(k) |d(k)|/2; only the magnitude is asserted, for k of any sign.)

    Substituting u = x/alpha shows the integral depends on alpha*k only,
    so that is how it is computed: adaptive quadrature on u in [0, 1]
    (through the kernel's log region), half-period Gauss panels out to
    u = 40 (where the Bessel tail is below e^-40), and the analytic
    sine-integral tail of the 1/u part beyond.
    """
    if k == 0:
        raise ValueError("the identity is undefined at k = 0")
    kappa = abs(alpha * k)

    def g(u):
        return bessel_k1_deficit(u) * np.sin(kappa * u)

    total, err = quad(g, 0.0, 1.0, epsabs=1e-13, epsrel=1e-11, limit=400)
    if err > quadrature_tolerance:
        raise RuntimeError(
            f"quadrature failed to converge on [0, 1]: err={err:.3e}"
        )
    tail_start = 40.0
    # panels short enough for both the oscillation and the kernel decay
    panel = min(math.pi / kappa, 2.0)
    n_panels = max(1, math.ceil((tail_start - 1.0) / panel))
    a = 1.0
    for _ in range(n_panels):
        part, _ = fixed_quad(g, a, a + panel, n=16)
        total += part
        a += panel
    # beyond u = a: 1/u contributes (pi/2 - Si(kappa a)) / ... analytically,
    # the K1 part is below K0(a) ~ e^-40 and is dropped
    si, _ = sici(kappa * a)
    total += 0.5 * math.pi - si
    numeric = total / math.pi
    expected = 0.5 * abs(d_of_k(k, alpha))
    return abs(numeric - expected)


def mode_amplitudes(trajectory, mode: int):
    """Times and k-th Fourier amplitudes of x2 (in circulation) along a
    trajectory of an x1-periodic sheet."""
    times = np.asarray(trajectory.times)
    amps = np.empty(len(times))
    for idx, state in enumerate(trajectory.states):
        coeff = np.fft.rfft(state.nodes[:, 1])
        amps[idx] = 2.0 * np.abs(coeff[mode]) / state.n_nodes
    return times, amps


def measure_growth_rate(
    trajectory,
    mode: int,
    fit_start: float = 0.5,
    fit_end: float = 2.0,
    linear_limit: float = 1e-3,
):
    """Least-squares slope of log amplitude of the k-th mode over the fit
    window.  Rejects windows where the perturbation leaves the linear
    regime (amplitude above linear_limit * L); returns 0.0 when the
    amplitude sits at round-off (nothing to fit)."""
    state0 = trajectory.states[0]
    if state0.topology != "periodic":
        raise ValueError("growth measurement expects an x1-periodic sheet")
    length = state0.period
    times, amps = mode_amplitudes(trajectory, mode)
    window = (times >= fit_start) & (times <= fit_end)
    if window.sum() < 2:
        raise ValueError("fewer than 2 samples in the fit window")
    t_w = times[window]
    a_w = amps[window]
    if a_w.max() > linear_limit * length:
        raise ValueError(
            "perturbation leaves the linear regime inside the fit window"
        )
    if a_w.max() < 1e-13 * length:
        return 0.0
    slope = np.polyfit(t_w, np.log(a_w), 1)[0]
    return float(slope)


def exponential_fit_residual(trajectory, mode: int, fit_start=0.5, fit_end=2.0):
    """RMS relative deviation of the mode amplitude from a pure
    exponential over the window (log-space residual)."""
    times, amps = mode_amplitudes(trajectory, mode)
    window = (times >= fit_start) & (times <= fit_end)
    t_w = times[window]
    log_a = np.log(amps[window])
    coeffs = np.polyfit(t_w, log_a, 1)
    return float(np.sqrt(np.mean((log_a - np.polyval(coeffs, t_w)) ** 2)))
