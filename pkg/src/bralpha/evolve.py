"""Fixed-step explicit time integration of the sheet dynamics.

The evolution is Lagrangian in circulation: node positions move with the
self-induced velocity while the circulation grid never changes, so total
circulation is conserved identically.  Fixed-step RK4 (or RK2) keeps runs
reproducible; the driver aborts loudly when the chord-arc monitor falls
below its floor or any coordinate stops being finite.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .diagnostics import (
    DiagnosticsRecord,
    PairSeparationMonitor,
    SeparationBoundConfig,
    compute_record,
)
from .kernels import KernelParams
from .sheet import VortexSheet, sheet_velocity

METHODS = ("rk4", "rk2")


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float
    t_end: float
    method: str = "rk4"
    diagnostics_every: int = 10
    snapshot_every: int = 10

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown integrator method {self.method!r}")
        if not self.dt > 0:
            raise ValueError("dt must be > 0")
        if self.t_end < 0:
            raise ValueError("t_end must be >= 0")
        # t_end == 0 is allowed and records only the initial state
        if self.t_end > 0 and self.dt > self.t_end:
            raise ValueError("dt must not exceed t_end")
        if self.diagnostics_every < 1 or self.snapshot_every < 1:
            raise ValueError("cadences must be positive step counts")

    def n_steps(self) -> int:
        if self.t_end == 0:
            return 0
        n = int(round(self.t_end / self.dt))
        if abs(n * self.dt - self.t_end) > 1e-9 * max(1.0, abs(self.t_end)):
            raise ValueError("t_end must be an integer number of dt steps")
        return n


@dataclass(frozen=True)
class AbortInfo:
    step: int
    time: float
    reason: str


@dataclass
class Trajectory:
    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    abort: AbortInfo | None = None
    record_steps: list = field(default_factory=list)

    def append(self, step: int, time: float, state: VortexSheet,
               record: DiagnosticsRecord) -> None:
        self.record_steps.append(step)
        self.times.append(time)
        self.states.append(state)
        self.diagnostics.append(record)


class NonFiniteNodeError(RuntimeError):
    def __init__(self, node_index: int):
        self.node_index = node_index
        super().__init__(f"non-finite coordinates at node {node_index}")


def rk4_step(f, y: np.ndarray, dt: float) -> np.ndarray:
    k1 = f(y)
    k2 = f(y + (0.5 * dt) * k1)
    k3 = f(y + (0.5 * dt) * k2)
    k4 = f(y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk2_step(f, y: np.ndarray, dt: float) -> np.ndarray:
    k1 = f(y)
    k2 = f(y + (0.5 * dt) * k1)
    return y + dt * k2


def _check_finite(nodes: np.ndarray) -> None:
    finite = np.isfinite(nodes).all(axis=1)
    if not finite.all():
        raise NonFiniteNodeError(int(np.nonzero(~finite)[0][0]))


def step(
    sheet: VortexSheet, params: KernelParams, dt: float, method: str = "rk4"
) -> VortexSheet:
    """One explicit Runge-Kutta step of dx/dt = induced velocity.

    The circulation grid is untouched.  Non-finite results raise
    :class:`NonFiniteNodeError` carrying the offending node index.
    """
    if not dt > 0:
        raise ValueError("dt must be > 0")
    if method not in METHODS:
        raise ValueError(f"unknown integrator method {method!r}")

    def rhs(nodes):
        _check_finite(nodes)
        return sheet_velocity(sheet.with_nodes(nodes), params)

    stepper = rk4_step if method == "rk4" else rk2_step
    new_nodes = stepper(rhs, sheet.nodes, dt)
    _check_finite(new_nodes)
    return sheet.with_nodes(new_nodes)


def run(config) -> Trajectory:
    """Integrate a simulation config to t_end.

    Diagnostics (and the in-memory trajectory) are recorded at step 0,
    every ``diagnostics_every`` steps, and at the final step.  The run
    aborts -- flushing the partial trajectory with an :class:`AbortInfo`
    -- when the chord-arc value drops below ``chord_arc_floor`` or any
    node coordinate becomes non-finite.
    """
    sheet = config.initial_sheet()
    params = config.kernel
    integ = config.integrator
    n_steps = integ.n_steps()

    monitor = None
    if params.kind == "br_alpha":
        monitor = PairSeparationMonitor(sheet, config.separation, params.alpha)

    traj = Trajectory()

    def record(step_index: int, time: float, state: VortexSheet):
        margin = (
            monitor.min_margin(state, time) if monitor is not None else math.nan
        )
        rec = compute_record(state, time, config.beta, margin)
        traj.append(step_index, time, state, rec)
        if rec.chord_arc_value < config.chord_arc_floor:
            traj.abort = AbortInfo(
                step_index,
                time,
                f"chord-arc {rec.chord_arc_value:.6e} fell below floor "
                f"{config.chord_arc_floor:.6e}",
            )
        return traj.abort is None

    if not record(0, 0.0, sheet):
        return traj
    for s in range(1, n_steps + 1):
        t = s * integ.dt
        try:
            sheet = step(sheet, params, integ.dt, integ.method)
        except NonFiniteNodeError as exc:
            traj.abort = AbortInfo(s, t, str(exc))
            return traj
        if (
            s % integ.diagnostics_every == 0
            or s % integ.snapshot_every == 0
            or s == n_steps
        ):
            if not record(s, t, sheet):
                return traj
    return traj
