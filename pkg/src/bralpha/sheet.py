"""Discrete circulation-parameterized vortex sheets.

A sheet is a curve sampled at N uniformly spaced circulation values; the
vorticity density is the derived quantity 1/|x_Gamma|, never stored.
Topologies:

* ``open``      finite curve, endpoints free
* ``closed``    loop: x(Gamma + span) = x(Gamma)
* ``periodic``  x1-periodic strip: x(Gamma + span) = x(Gamma) + (L, 0)

The induced velocity is the composite-trapezoid discretization of the
smoothed Biot-Savart integral; the integrand is continuous (bounded
kernel), so the diagonal term is simply the kernel's zero limit and no
principal-value treatment is needed.
"""

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from . import _backend
from .kernels import KernelParams

TOPOLOGIES = ("open", "closed", "periodic")


@dataclass(frozen=True)
class VortexSheet:
    nodes: np.ndarray
    gamma_start: float
    gamma_end: float
    topology: str = "open"
    period: float | None = None

    def __post_init__(self):
        nodes = np.ascontiguousarray(self.nodes, dtype=np.float64)
        if nodes.ndim != 2 or nodes.shape[1] != 2:
            raise ValueError("nodes must have shape (N, 2)")
        if nodes.shape[0] < 2:
            raise ValueError("a sheet needs at least 2 nodes")
        if not np.isfinite(nodes).all():
            raise ValueError("node coordinates must be finite")
        if not self.gamma_start < self.gamma_end:
            raise ValueError("gamma_start must be < gamma_end")
        if self.topology not in TOPOLOGIES:
            raise ValueError(f"unknown topology {self.topology!r}")
        if self.topology == "periodic":
            if self.period is None or not self.period > 0:
                raise ValueError("periodic topology requires period > 0")
        elif self.period is not None:
            raise ValueError("period is only meaningful for periodic topology")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]

    @property
    def gamma_span(self) -> float:
        return self.gamma_end - self.gamma_start

    @property
    def delta_gamma(self) -> float:
        n = self.n_nodes
        return self.gamma_span / (n if self.topology != "open" else n - 1)

    def gammas(self) -> np.ndarray:
        return self.gamma_start + self.delta_gamma * np.arange(self.n_nodes)

    def weights(self) -> np.ndarray:
        """Trapezoid circulation weights (uniform for gamma-periodic sheets)."""
        w = np.full(self.n_nodes, self.delta_gamma)
        if self.topology == "open":
            w[0] *= 0.5
            w[-1] *= 0.5
        return w

    def with_nodes(self, nodes: np.ndarray) -> "VortexSheet":
        return replace(self, nodes=nodes)


def _mode_code(topology: str) -> int:
    return {"open": 0, "closed": 1, "periodic": 2}[topology]


def _impl():
    if _backend.numba_enabled():
        from . import _accel

        return _accel
    from . import _slow

    return _slow


def sheet_velocity(sheet: VortexSheet, params: KernelParams) -> np.ndarray:
    """Self-induced velocity at every node, shape (N, 2).

    Composite trapezoid in circulation; the j = i term is the kernel's
    continuous zero at the origin.  The singular euler kernel is
    rejected, as is any periodicity mismatch between sheet and params.
    """
    if params.kind == "euler":
        raise ValueError(
            "singular kernel not integrable by this quadrature; "
            "use br_alpha or blob"
        )
    if sheet.topology == "periodic":
        if params.period is None:
            raise ValueError("periodic sheet requires periodic kernel params")
        if params.period != sheet.period:
            raise ValueError("kernel period does not match sheet period")
        if params.kind != "br_alpha":
            raise ValueError("periodic summation is implemented for br_alpha only")
        return _impl().velocity_periodic(
            sheet.nodes,
            sheet.delta_gamma,
            params.alpha,
            sheet.period,
            params.image_tail_threshold,
        )
    if params.period is not None:
        raise ValueError("periodic kernel params require a periodic sheet")
    kind = 1 if params.kind == "br_alpha" else 2
    return _impl().velocity_direct(
        sheet.nodes,
        sheet.weights(),
        params.alpha or 0.0,
        params.delta or 0.0,
        kind,
    )


def chord_arc(sheet: VortexSheet) -> float:
    """Discrete chord-arc constant: min over node pairs of
    |x_i - x_j| / dGamma(i, j).

    Gamma distance wraps on gamma-periodic sheets; spatial distance is
    taken modulo the image lattice for x1-periodic ones.  Zero means two
    nodes coincide at distinct circulations (degenerate sheet).
    """
    return float(
        _impl().min_chord_over_gamma(
            sheet.nodes,
            sheet.gammas(),
            sheet.gamma_span,
            sheet.period or 0.0,
            _mode_code(sheet.topology),
        )
    )


def _ramp(sheet: VortexSheet, n: int) -> np.ndarray:
    # linear drift of x1 per gamma period for x1-periodic sheets
    return sheet.period * np.arange(n) / n


def _trig_resample(y: np.ndarray, m: int) -> np.ndarray:
    """Evaluate the trigonometric interpolant of y (uniform grid, length n)
    on a uniform grid of length m.  Exact both ways for band-limited data;
    the even-n Nyquist mode is split symmetrically so the result is real
    and n -> 2n -> n round-trips are exact."""
    n = len(y)
    c = np.fft.fft(y) / n
    out = np.zeros(m, dtype=complex)
    kmax = n // 2
    if n % 2 == 0:
        for k in range(-kmax + 1, kmax):
            out[k % m] += c[k % n]
        out[kmax % m] += 0.5 * c[kmax]
        out[-kmax % m] += 0.5 * c[kmax]
    else:
        for k in range(-kmax, kmax + 1):
            out[k % m] += c[k % n]
    return np.fft.ifft(out * m).real


def resample(sheet: VortexSheet, new_n: int) -> VortexSheet:
    """Interpolate the sheet onto new_n uniform circulation nodes.

    Gamma-periodic sheets use trigonometric interpolation (spectrally
    exact for band-limited curves); open sheets use a cubic spline.
    Total circulation is untouched.
    """
    if new_n < 4:
        raise ValueError("resample requires new_n >= 4")
    n = sheet.n_nodes
    if sheet.topology == "open":
        from scipy.interpolate import CubicSpline

        g_old = sheet.gammas()
        g_new = sheet.gamma_start + (sheet.gamma_span / (new_n - 1)) * np.arange(
            new_n
        )
        spline = CubicSpline(g_old, sheet.nodes, axis=0)
        return sheet.with_nodes(spline(g_new))
    x1 = sheet.nodes[:, 0].copy()
    if sheet.topology == "periodic":
        x1 -= _ramp(sheet, n)
    new_x1 = _trig_resample(x1, new_n)
    if sheet.topology == "periodic":
        new_x1 += _ramp(sheet, new_n)
    new_x2 = _trig_resample(sheet.nodes[:, 1], new_n)
    return sheet.with_nodes(np.column_stack([new_x1, new_x2]))


def gamma_derivatives(sheet: VortexSheet):
    """First and second circulation derivatives of the node positions.

    4th-order central stencils with wrap-around ghosts for gamma-periodic
    sheets (x1 ghosts carry the +-L offsets); 2nd-order one-sided stencils
    near open endpoints.
    """
    n = sheet.n_nodes
    h = sheet.delta_gamma
    x = sheet.nodes
    if sheet.topology != "open":
        ext = np.empty((n + 4, 2))
        ext[2 : n + 2] = x
        ext[:2] = x[n - 2 :]
        ext[n + 2 :] = x[:2]
        if sheet.topology == "periodic":
            ext[:2, 0] -= sheet.period
            ext[n + 2 :, 0] += sheet.period
        xg = (ext[:-4] - 8 * ext[1:-3] + 8 * ext[3:-1] - ext[4:]) / (12 * h)
        xgg = (
            -ext[:-4] + 16 * ext[1:-3] - 30 * ext[2:-2] + 16 * ext[3:-1] - ext[4:]
        ) / (12 * h * h)
        return xg, xgg
    if n < 4:
        raise ValueError("derivatives need at least 4 nodes on an open sheet")
    xg = np.empty_like(x)
    xgg = np.empty_like(x)
    xg[2:-2] = (x[:-4] - 8 * x[1:-3] + 8 * x[3:-1] - x[4:]) / (12 * h)
    xgg[2:-2] = (-x[:-4] + 16 * x[1:-3] - 30 * x[2:-2] + 16 * x[3:-1] - x[4:]) / (
        12 * h * h
    )
    xg[0] = (-3 * x[0] + 4 * x[1] - x[2]) / (2 * h)
    xg[1] = (x[2] - x[0]) / (2 * h)
    xg[-2] = (x[-1] - x[-3]) / (2 * h)
    xg[-1] = (3 * x[-1] - 4 * x[-2] + x[-3]) / (2 * h)
    xgg[0] = (2 * x[0] - 5 * x[1] + 4 * x[2] - x[3]) / (h * h)
    xgg[1] = (x[0] - 2 * x[1] + x[2]) / (h * h)
    xgg[-2] = (x[-3] - 2 * x[-2] + x[-1]) / (h * h)
    xgg[-1] = (2 * x[-1] - 5 * x[-2] + 4 * x[-3] - x[-4]) / (h * h)
    return xg, xgg


def vorticity_density(sheet: VortexSheet) -> np.ndarray:
    """Derived density 1/|x_Gamma| at the nodes."""
    xg, _ = gamma_derivatives(sheet)
    speed = np.sqrt(xg[:, 0] ** 2 + xg[:, 1] ** 2)
    return 1.0 / speed


# ---------------------------------------------------------------------------
# initial conditions


def flat_sheet(n: int, length: float, gamma0: float = 1.0) -> VortexSheet:
    """Flat x1-periodic sheet with uniform density gamma0."""
    x1 = length * np.arange(n) / n
    nodes = np.column_stack([x1, np.zeros(n)])
    return VortexSheet(nodes, 0.0, gamma0 * length, "periodic", length)


def perturbed_flat_sheet(
    n: int,
    length: float,
    gamma0: float,
    mode: int,
    eps: float,
    eigenvector_seeded: bool = True,
) -> VortexSheet:
    """Flat sheet plus a single-mode perturbation of amplitude eps.

    With ``eigenvector_seeded`` the node circulations are shifted along
    the curve so the derived density perturbation matches the growing
    eigenvector of the linearized dynamics (density is not independently
    storable); otherwise only x2 is perturbed, which excites the growing
    and decaying branches equally.
    """
    if eps <= 0:
        raise ValueError("eps must be > 0")
    if mode < 1:
        raise ValueError("mode must be a positive integer")
    base = length * np.arange(n) / n
    wavenumber = 2.0 * math.pi * mode / length
    bump = eps * np.cos(wavenumber * base)
    x1 = base - bump if eigenvector_seeded else base
    return VortexSheet(
        np.column_stack([x1, bump]), 0.0, gamma0 * length, "periodic", length
    )


def circle_sheet(n: int, radius: float, gamma0: float = 1.0) -> VortexSheet:
    """Closed circular sheet, arc-length parameterized (uniform density)."""
    theta = 2.0 * math.pi * np.arange(n) / n
    nodes = radius * np.column_stack([np.cos(theta), np.sin(theta)])
    return VortexSheet(nodes, 0.0, gamma0 * 2.0 * math.pi * radius, "closed")


# ---------------------------------------------------------------------------
# serialization (snapshot JSON schema)


def sheet_to_dict(sheet: VortexSheet) -> dict:
    d = {"topology": sheet.topology}
    if sheet.period is not None:
        d["period"] = sheet.period
    d["gamma_start"] = sheet.gamma_start
    d["gamma_end"] = sheet.gamma_end
    d["nodes"] = sheet.nodes.tolist()
    return d


def sheet_from_dict(d: dict) -> VortexSheet:
    return VortexSheet(
        np.asarray(d["nodes"], dtype=np.float64),
        float(d["gamma_start"]),
        float(d["gamma_end"]),
        d["topology"],
        float(d["period"]) if "period" in d else None,
    )


def save_sheet(sheet: VortexSheet, path) -> None:
    with open(path, "w") as f:
        json.dump(sheet_to_dict(sheet), f)
        f.write("\n")


def load_sheet(path) -> VortexSheet:
    with open(path) as f:
        return sheet_from_dict(json.load(f))
