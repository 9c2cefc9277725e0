import math
from dataclasses import dataclass, field

import numpy as np
import pytest

from bralpha.diagnostics import SeparationBoundConfig
from bralpha.evolve import (
    IntegratorConfig,
    NonFiniteNodeError,
    Trajectory,
    rk4_step,
    run,
    step,
)
from bralpha.kernels import KernelParams
from bralpha.sheet import VortexSheet, circle_sheet, flat_sheet, sheet_velocity

L = 2.0 * math.pi


@dataclass
class StubConfig:
    """Minimal duck-typed stand-in for SimulationConfig in driver tests."""

    sheet: VortexSheet
    kernel: KernelParams
    integrator: IntegratorConfig
    beta: float = 0.5
    chord_arc_floor: float = 0.0
    separation: SeparationBoundConfig = field(
        default_factory=SeparationBoundConfig
    )

    def initial_sheet(self):
        return self.sheet


class TestIntegratorConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            IntegratorConfig(dt=0.0, t_end=1.0)
        with pytest.raises(ValueError):
            IntegratorConfig(dt=0.5, t_end=0.2)
        with pytest.raises(ValueError):
            IntegratorConfig(dt=0.1, t_end=1.0, method="euler_fwd")
        with pytest.raises(ValueError):
            IntegratorConfig(dt=0.1, t_end=1.0, diagnostics_every=0)
        # t_end = 0 is a valid "record the initial state only" run
        assert IntegratorConfig(dt=0.1, t_end=0.0).n_steps() == 0
        with pytest.raises(ValueError):
            IntegratorConfig(dt=0.3, t_end=1.0).n_steps()

    def test_step_count(self):
        assert IntegratorConfig(dt=0.01, t_end=2.0).n_steps() == 200


class TestStep:
    def test_flat_sheet_fixed_point(self):
        s = flat_sheet(128, L)
        p = KernelParams("br_alpha", alpha=0.3, period=L)
        after = step(s, p, 0.5)
        assert np.abs(after.nodes - s.nodes).max() <= 1e-13

    def test_gamma_grid_untouched(self):
        s = circle_sheet(32, 1.0)
        p = KernelParams("br_alpha", alpha=0.4)
        after = step(s, p, 0.1)
        assert after.gamma_start == s.gamma_start
        assert after.gamma_end == s.gamma_end
        assert after.topology == s.topology

    def test_reversibility_scaling(self):
        # forward step then a step of the negated field returns the start
        # to the RK4 local error, O(dt^5)
        s = circle_sheet(48, 1.0)
        p = KernelParams("br_alpha", alpha=0.4)

        def rhs(nodes):
            return sheet_velocity(s.with_nodes(nodes), p)

        def neg_rhs(nodes):
            return -sheet_velocity(s.with_nodes(nodes), p)

        mismatches = []
        for dt in (0.4, 0.2):
            there = rk4_step(rhs, s.nodes, dt)
            back = rk4_step(neg_rhs, there, dt)
            mismatches.append(np.abs(back - s.nodes).max())
        order = math.log2(mismatches[0] / mismatches[1])
        assert order >= 4.5  # local truncation, expect ~5

    def test_point_vortex_pair_rotates_about_midpoint(self):
        s = VortexSheet(np.array([[0.0, 0.0], [1.0, 0.0]]), 0.0, 1.0)
        p = KernelParams("br_alpha", alpha=0.5)
        mid0 = s.nodes.mean(axis=0)
        r0 = np.abs(s.nodes[0] - s.nodes[1])
        state = s
        for _ in range(50):
            state = step(state, p, 0.1)
        mid = state.nodes.mean(axis=0)
        assert np.abs(mid - mid0).max() <= 1e-13
        r = np.hypot(*(state.nodes[0] - state.nodes[1]))
        assert abs(r - np.hypot(*r0)) <= 1e-8
        # it actually moved
        assert np.abs(state.nodes - s.nodes).max() > 0.1

    def test_nonfinite_reports_node_index(self, monkeypatch):
        # the smoothed kernels keep velocities bounded, so this guard only
        # fires on faults; inject one and check it names the node
        s = circle_sheet(8, 1.0)
        p = KernelParams("br_alpha", alpha=0.4)

        def broken_velocity(sheet, params):
            u = np.zeros_like(sheet.nodes)
            u[5, 1] = np.nan
            return u

        import bralpha.evolve as evolve_mod

        monkeypatch.setattr(evolve_mod, "sheet_velocity", broken_velocity)
        with pytest.raises(NonFiniteNodeError) as info:
            step(s, p, 0.1)
        assert info.value.node_index == 5
        assert "node 5" in str(info.value)

    def test_rk2_available(self):
        s = circle_sheet(16, 1.0)
        p = KernelParams("br_alpha", alpha=0.4)
        after = step(s, p, 0.05, method="rk2")
        assert np.isfinite(after.nodes).all()


class TestTemporalConvergence:
    def test_rk4_observed_order(self):
        p = KernelParams("br_alpha", alpha=0.4)

        def integrate(dt, t_end=0.5):
            state = circle_sheet(32, 1.0)
            # slightly deformed so the motion is not a pure rotation
            state = state.with_nodes(
                state.nodes * (1.0 + 0.1 * np.cos(2 * np.linspace(0, 2 * np.pi, 33)[:-1]))[:, None]
            )
            for _ in range(int(round(t_end / dt))):
                state = step(state, p, dt)
            return state.nodes

        ref = integrate(0.4 / 128)
        errs = [np.abs(integrate(dt) - ref).max() for dt in (0.1, 0.05, 0.025)]
        orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
        assert min(orders) >= 3.8


class TestRun:
    def test_t_end_zero_records_initial_only(self):
        cfg = StubConfig(
            flat_sheet(16, L),
            KernelParams("br_alpha", alpha=0.3, period=L),
            IntegratorConfig(dt=0.1, t_end=0.0),
        )
        traj = run(cfg)
        assert len(traj.states) == 1
        assert traj.times == [0.0]
        assert traj.abort is None
        assert len(traj.diagnostics) == 1

    def test_flat_run_stationary_diagnostics(self):
        cfg = StubConfig(
            flat_sheet(64, L),
            KernelParams("br_alpha", alpha=0.3, period=L),
            IntegratorConfig(dt=0.05, t_end=1.0, diagnostics_every=5),
        )
        traj = run(cfg)
        assert traj.abort is None
        first = traj.states[0].nodes
        for state in traj.states[1:]:
            assert np.abs(state.nodes - first).max() <= 1e-12
        chords = [rec.chord_arc_value for rec in traj.diagnostics]
        assert max(chords) - min(chords) <= 1e-12

    def test_chord_floor_abort(self):
        cfg = StubConfig(
            flat_sheet(16, L),
            KernelParams("br_alpha", alpha=0.3, period=L),
            IntegratorConfig(dt=0.1, t_end=1.0),
            chord_arc_floor=2.0,  # above the initial value 1.0
        )
        traj = run(cfg)
        assert traj.abort is not None
        assert traj.abort.step == 0
        assert "chord-arc" in traj.abort.reason
        assert len(traj.diagnostics) == 1  # partial trajectory flushed

    def test_nonfinite_abort(self, monkeypatch):
        def broken_velocity(sheet, params):
            u = np.zeros_like(sheet.nodes)
            u[2] = np.inf
            return u

        import bralpha.evolve as evolve_mod

        monkeypatch.setattr(evolve_mod, "sheet_velocity", broken_velocity)
        cfg = StubConfig(
            circle_sheet(8, 1.0),
            KernelParams("br_alpha", alpha=0.4),
            IntegratorConfig(dt=0.1, t_end=1.0),
        )
        traj = run(cfg)
        assert traj.abort is not None
        assert "node 2" in traj.abort.reason
        assert traj.abort.step == 1
        assert len(traj.diagnostics) == 1  # initial record still flushed

    def test_total_circulation_exactly_constant(self):
        cfg = StubConfig(
            circle_sheet(24, 1.0, 1.5),
            KernelParams("br_alpha", alpha=0.4),
            IntegratorConfig(dt=0.05, t_end=0.5, diagnostics_every=2),
        )
        traj = run(cfg)
        spans = {state.gamma_span for state in traj.states}
        assert len(spans) == 1

    def test_centroid_conserved(self):
        cfg = StubConfig(
            circle_sheet(48, 1.0, 1.0),
            KernelParams("br_alpha", alpha=0.4),
            IntegratorConfig(dt=0.02, t_end=1.0, diagnostics_every=10),
        )
        traj = run(cfg)
        c0 = np.array(traj.diagnostics[0].centroid)
        for t, rec in zip(traj.times[1:], traj.diagnostics[1:]):
            drift = np.abs(np.array(rec.centroid) - c0).max()
            assert drift <= 1e-10 * t

    def test_record_steps_union_of_cadences(self):
        cfg = StubConfig(
            flat_sheet(16, L),
            KernelParams("br_alpha", alpha=0.3, period=L),
            IntegratorConfig(
                dt=0.1, t_end=1.0, diagnostics_every=4, snapshot_every=3
            ),
        )
        traj = run(cfg)
        assert traj.record_steps == [0, 3, 4, 6, 8, 9, 10]
