"""Biot-Savart kernels: singular, Helmholtz-filtered, and blob-smoothed.

All kernels map a planar separation ``dx`` to a velocity-per-unit-
circulation vector proportional to ``dx_perp = (-dx2, dx1)``:

* ``euler``     K(x)      = x_perp / (2 pi |x|^2)          (singular at 0)
* ``br_alpha``  K_a(x)    = (x_perp/|x|) DPsi_a(|x|)        (bounded)
* ``blob``      K_d(x)    = x_perp / (2 pi (|x|^2 + d^2))   (bounded)

with the filtered stream difference

    Psi_a(r)  = (K0(r/a) + log r) / (2 pi)
    DPsi_a(r) = (1/r - K1(r/a)/a) / (2 pi)
              = (1/2 pi a) * [1/z - K1(z)],  z = r/a,

computed through :func:`bralpha.specfun.bessel_k1_deficit` so the pole
cancellation never happens in floating point.

The x1-periodic forms sum over the image lattice {(m L, 0)}: the singular
part has the closed cotangent-kernel form, and the smoothing correction
decays like exp(-r/a) so its image sum is truncated at
``|x_m|/a <= image_tail_threshold`` (tail below e^-threshold).
"""

import math
from dataclasses import dataclass

import numpy as np

from .specfun import bessel_k0, bessel_k1_deficit

TWO_PI = 2.0 * math.pi

KERNEL_KINDS = ("euler", "br_alpha", "blob")


@dataclass(frozen=True)
class KernelParams:
    """Kernel selection plus its length scale and optional x1-periodicity."""

    kind: str
    alpha: float | None = None
    delta: float | None = None
    period: float | None = None
    image_tail_threshold: float = 40.0

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "br_alpha":
            if self.alpha is None or not self.alpha > 0:
                raise ValueError("br_alpha kernel requires alpha > 0")
        if self.kind == "blob":
            if self.delta is None or not self.delta > 0:
                raise ValueError("blob kernel requires delta > 0")
        if self.period is not None and not self.period > 0:
            raise ValueError("period must be > 0 when given")
        if not self.image_tail_threshold >= 10:
            raise ValueError("image_tail_threshold must be >= 10")

    @property
    def scale(self) -> float:
        return self.alpha if self.kind == "br_alpha" else (self.delta or 0.0)


def dpsi_alpha(r, alpha):
    """Radial derivative of the filtered stream difference.

    Behaves like -(r / 4 pi a^2) log(r/a) near 0 and approaches
    1/(2 pi r) once r >> a.  Raises for r <= 0.
    """
    if not alpha > 0:
        raise ValueError("alpha must be > 0")
    r_arr = np.asarray(r, dtype=np.float64)
    if r_arr.size and not (r_arr > 0).all():
        raise ValueError("r must be > 0")
    return bessel_k1_deficit(r_arr / alpha) / (TWO_PI * alpha)


def psi_alpha(r, alpha):
    """Filtered stream difference (K0(r/a) + log r) / 2 pi, for r > 0.

    Its r -> 0+ limit is (log a + log 2 - EulerGamma) / 2 pi.
    """
    if not alpha > 0:
        raise ValueError("alpha must be > 0")
    r_arr = np.asarray(r, dtype=np.float64)
    if r_arr.size and not (r_arr > 0).all():
        raise ValueError("r must be > 0")
    return (bessel_k0(r_arr / alpha) + np.log(r_arr)) / TWO_PI


def _perp(dx):
    out = np.empty_like(dx)
    out[..., 0] = -dx[..., 1]
    out[..., 1] = dx[..., 0]
    return out


def kernel_eval(dx, params: KernelParams):
    """Evaluate the free-space kernel at separations ``dx`` (shape (..., 2)).

    br_alpha and blob are continuous with value (0, 0) at dx = 0; the
    euler kind raises there.  Antisymmetric: K(-dx) = -K(dx).
    """
    dx = np.asarray(dx, dtype=np.float64)
    if dx.shape[-1] != 2:
        raise ValueError("dx must have shape (..., 2)")
    r2 = dx[..., 0] ** 2 + dx[..., 1] ** 2
    if params.kind == "euler":
        if not (r2 > 0).all():
            raise ValueError("euler kernel is singular at dx = 0")
        factor = 1.0 / (TWO_PI * r2)
    elif params.kind == "blob":
        factor = 1.0 / (TWO_PI * (r2 + params.delta**2))
    else:
        factor = np.zeros_like(r2)
        pos = r2 > 0
        r = np.sqrt(r2[pos])
        factor[pos] = bessel_k1_deficit(r / params.alpha) / (
            TWO_PI * params.alpha * r
        )
    return _perp(dx) * factor[..., None]


def _reduce_periodic(dx1, L):
    return dx1 - L * np.rint(dx1 / L)


def _euler_periodic(dx1r, dx2, L):
    # Closed-form image sum of the singular kernel over {(m L, 0)}:
    #   (1/2L) (-sinh(2 pi x2/L), sin(2 pi x1/L)) / (cosh(2 pi x2/L) - cos(..)),
    # with the denominator in the cancellation-free form 2 (sinh^2 + sin^2)
    zr = np.pi * dx1r / L
    zi = np.pi * dx2 / L
    out = np.empty(np.broadcast(zr, zi).shape + (2,))
    big = np.abs(zi) > 350.0  # sinh overflow: kernel saturates at far-field shear
    with np.errstate(over="ignore", invalid="ignore"):
        sh = np.sign(zi) * np.sinh(np.where(big, 0.0, np.abs(zi)))
        t = np.sign(zr) * np.sin(np.abs(zr))
        den = 2.0 * L * (sh * sh + t * t)
        out[..., 0] = np.where(big, -np.sign(zi) / (2.0 * L), -sh * np.cosh(zi) / den)
        out[..., 1] = np.where(big, 0.0, t * np.cos(np.abs(zr)) / den)
    return out


def kernel_eval_periodic(dx, params: KernelParams):
    """x1-periodic kernel (image sum over {(m L, 0)}), kinds euler/br_alpha.

    The euler kind raises on the image lattice; br_alpha takes its
    continuous limit (0, 0) there.
    """
    if params.period is None:
        raise ValueError("periodic evaluation requires params.period")
    if params.kind == "blob":
        raise ValueError("periodic form is defined for euler and br_alpha only")
    L = params.period
    dx = np.asarray(dx, dtype=np.float64)
    if dx.shape[-1] != 2:
        raise ValueError("dx must have shape (..., 2)")
    dx1 = _reduce_periodic(dx[..., 0], L)
    dx2 = dx[..., 1]
    r2 = dx1**2 + dx2**2
    on_lattice = r2 == 0.0

    if params.kind == "euler":
        if on_lattice.any():
            raise ValueError("periodic euler kernel is singular on the lattice")
        return _euler_periodic(dx1, dx2, L)

    from ._slow import periodic_bralpha_pair

    ex, ey = periodic_bralpha_pair(
        dx1, dx2, params.alpha, L, params.image_tail_threshold
    )
    out = np.empty(np.broadcast(dx1, dx2).shape + (2,))
    out[..., 0] = ex
    out[..., 1] = ey
    return out
