"""Regularity monitors for sheet trajectories.

These are the discrete versions of the quantities whose control keeps a
smooth self-avoiding sheet smooth: the chord-arc constant, Hölder
semi-norms of x_Gamma, curvature, the derived density, conserved
integrals, and a double-exponential lower bound on the separation of
initially close node pairs.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .sheet import VortexSheet, chord_arc, gamma_derivatives

_LOG_GUARD = 700.0


@dataclass(frozen=True)
class DiagnosticsRecord:
    time: float
    chord_arc_value: float
    sup_xgamma: float
    holder_seminorm_xgamma: float
    max_curvature: float
    min_density: float
    max_density: float
    centroid: tuple[float, float]
    separation_bound_margin: float

    # column order of the diagnostics CSV is fixed
    CSV_COLUMNS = (
        "time",
        "chord_arc",
        "sup_xgamma",
        "holder_xgamma_beta",
        "max_curvature",
        "min_gamma",
        "max_gamma",
        "centroid_x1",
        "centroid_x2",
        "sep_margin_min",
    )

    def csv_values(self):
        return (
            self.time,
            self.chord_arc_value,
            self.sup_xgamma,
            self.holder_seminorm_xgamma,
            self.max_curvature,
            self.min_density,
            self.max_density,
            self.centroid[0],
            self.centroid[1],
            self.separation_bound_margin,
        )


@dataclass(frozen=True)
class SeparationBoundConfig:
    """Configuration of the pair-separation lower-bound monitor.

    The bound's constant is not pinned by the theory, so it is user
    input; the default C = 1 makes the monitor a functional-form check,
    not a sharp inequality.  vorticity_mass defaults to the total
    circulation of the sheet being tracked.
    """

    constant_C: float = 1.0
    vorticity_mass: float | None = None
    sample_pairs: int = 64

    def __post_init__(self):
        if not self.constant_C > 0:
            raise ValueError("constant_C must be > 0")
        if self.sample_pairs < 1:
            raise ValueError("sample_pairs must be >= 1")


def holder_seminorm(values, gammas, beta, gamma_period=None):
    """Discrete Hölder semi-norm: max over pairs of
    |v_i - v_j| / dGamma^beta, with dGamma wrapped when gamma_period is
    given.  values may be scalars (N,) or vectors (N, d)."""
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in (0, 1)")
    vals = np.asarray(values, dtype=np.float64)
    if vals.ndim == 1:
        vals = vals[:, None]
    gam = np.asarray(gammas, dtype=np.float64)
    if len(gam) != len(vals) or len(vals) < 2:
        raise ValueError("need >= 2 values aligned with gammas")
    impl = _accel_or_slow()
    return float(
        impl.holder_pair_max(
            np.ascontiguousarray(vals),
            gam,
            gamma_period if gamma_period is not None else 0.0,
            gamma_period is not None,
            beta,
        )
    )


def _accel_or_slow():
    if _backend.numba_enabled():
        from . import _accel

        return _accel
    from . import _slow

    return _slow


def curvature(sheet: VortexSheet) -> np.ndarray:
    """Discrete curvature |x_G x x_GG| / |x_G|^3 at every node."""
    if sheet.n_nodes < 8:
        raise ValueError("curvature needs at least 8 nodes")
    if chord_arc(sheet) == 0.0:
        raise ValueError("curvature undefined on a degenerate sheet")
    xg, xgg = gamma_derivatives(sheet)
    cross = xg[:, 0] * xgg[:, 1] - xg[:, 1] * xgg[:, 0]
    speed = np.sqrt(xg[:, 0] ** 2 + xg[:, 1] ** 2)
    return np.abs(cross) / speed**3


def phi_comparison(r):
    """Log-Lipschitz comparison function: 0 at 0, r (1 - log r) on (0, 1),
    and 1 beyond; continuous and nondecreasing on [0, 1]."""
    arr = np.asarray(r, dtype=np.float64)
    if arr.size and (arr < 0).any():
        raise ValueError("r must be >= 0")
    mid = (arr > 0) & (arr < 1)
    out = np.where(arr >= 1.0, 1.0, 0.0)
    if mid.any():
        rm = arr[mid]
        out = np.asarray(out, dtype=np.float64)
        out[mid] = rm * (1.0 - np.log(rm))
    if np.ndim(r) == 0:
        return float(out)
    return out


def separation_lower_bound(initial_ratio, t, c1):
    """Pair-separation lower bound (|dx|/alpha) at time t for a pair that
    started at initial_ratio < 1: initial_ratio**E * exp(1 - E) with
    E = exp(t * c1).  Evaluated in log space so large t underflows to an
    exact 0 instead of overflowing."""
    if t == 0.0:
        return float(initial_ratio)
    log_e = t * c1
    if log_e > _LOG_GUARD:
        return 0.0
    e = math.exp(log_e)
    log_bound = 1.0 - e + e * math.log(initial_ratio)
    if log_bound < -_LOG_GUARD:
        return 0.0
    return math.exp(log_bound)


class PairSeparationMonitor:
    """Tracks the closest node pairs of an initial sheet and compares their
    later separations against the double-exponential lower bound."""

    def __init__(self, initial: VortexSheet, cfg: SeparationBoundConfig, alpha: float):
        if not alpha > 0:
            raise ValueError("alpha must be > 0")
        self.alpha = alpha
        mass = (
            cfg.vorticity_mass
            if cfg.vorticity_mass is not None
            else initial.gamma_span
        )
        self.c1 = cfg.constant_C / alpha**2 * mass
        self.pairs, self.initial_ratios = _closest_pairs(
            initial, cfg.sample_pairs, alpha
        )

    @property
    def n_pairs(self) -> int:
        return len(self.initial_ratios)

    def min_margin(self, sheet: VortexSheet, t: float) -> float:
        """min over tracked pairs of (observed ratio - bound); nan if no
        pair started inside the informative regime (ratio < 1)."""
        if not self.n_pairs:
            return math.nan
        i, j = self.pairs[:, 0], self.pairs[:, 1]
        dx = sheet.nodes[i] - sheet.nodes[j]
        d1 = dx[:, 0]
        if sheet.topology == "periodic":
            d1 = d1 - sheet.period * np.rint(d1 / sheet.period)
        observed = np.hypot(d1, dx[:, 1]) / self.alpha
        bounds = np.array(
            [separation_lower_bound(r0, t, self.c1) for r0 in self.initial_ratios]
        )
        return float((observed - bounds).min())


def _closest_pairs(sheet: VortexSheet, count: int, alpha: float):
    nodes = sheet.nodes
    n = len(nodes)
    block = 512
    idx_i = []
    idx_j = []
    ratios = []
    for s in range(0, n, block):
        e = min(s + block, n)
        d1 = nodes[s:e, None, 0] - nodes[None, :, 0]
        if sheet.topology == "periodic":
            d1 -= sheet.period * np.rint(d1 / sheet.period)
        d2 = nodes[s:e, None, 1] - nodes[None, :, 1]
        ratio = np.hypot(d1, d2) / alpha
        ii, jj = np.nonzero(ratio < 1.0)
        keep = (ii + s) < jj  # upper triangle only
        idx_i.append(ii[keep] + s)
        idx_j.append(jj[keep])
        ratios.append(ratio[ii[keep], jj[keep]])
    if not idx_i or not sum(len(a) for a in idx_i):
        return np.empty((0, 2), dtype=np.int64), np.empty(0)
    ii = np.concatenate(idx_i)
    jj = np.concatenate(idx_j)
    rr = np.concatenate(ratios)
    order = np.lexsort((jj, ii, rr))[:count]
    return np.column_stack([ii[order], jj[order]]), rr[order]


def separation_bound_check(trajectory, cfg: SeparationBoundConfig, alpha: float):
    """Minimum pair margin at each recorded time of a trajectory."""
    monitor = PairSeparationMonitor(trajectory.states[0], cfg, alpha)
    return [
        monitor.min_margin(state, t)
        for t, state in zip(trajectory.times, trajectory.states)
    ]


def compute_record(
    sheet: VortexSheet,
    time: float,
    beta: float,
    separation_margin: float = math.nan,
) -> DiagnosticsRecord:
    """Assemble the full diagnostics record for one sheet snapshot."""
    xg, _ = gamma_derivatives(sheet)
    speed = np.sqrt(xg[:, 0] ** 2 + xg[:, 1] ** 2)
    gammas = sheet.gammas()
    wrap = sheet.gamma_span if sheet.topology != "open" else None
    weights = sheet.weights()
    centroid = (weights[:, None] * sheet.nodes).sum(axis=0) / weights.sum()
    return DiagnosticsRecord(
        time=time,
        chord_arc_value=chord_arc(sheet),
        sup_xgamma=float(speed.max()),
        holder_seminorm_xgamma=holder_seminorm(xg, gammas, beta, wrap),
        max_curvature=float(curvature(sheet).max()) if sheet.n_nodes >= 8 else 0.0,
        min_density=float((1.0 / speed).min()),
        max_density=float((1.0 / speed).max()),
        centroid=(float(centroid[0]), float(centroid[1])),
        separation_bound_margin=separation_margin,
    )
