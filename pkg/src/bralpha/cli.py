"""Command-line front end.

Subcommands: simulate, stability, verify-ft, kernel-table, convergence,
replay.  All data files are deterministic (repr floats, fixed column
order, no timestamps); only the run manifest carries wall-clock info.
Exit codes: 0 success, 2 validation error, 3 runtime abort; failures
also emit one machine-readable JSON object on stderr.
"""

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import _backend
from .config import ConfigError, parse_config, serialize_config
from .diagnostics import DiagnosticsRecord, PairSeparationMonitor, compute_record
from .evolve import run
from .kernels import KernelParams
from .sheet import load_sheet, resample, save_sheet, sheet_velocity
from .specfun import bessel_k0, bessel_k1
from .stability import (
    blob_growth_rate,
    br_alpha_growth_rate,
    euler_growth_rate,
    verify_ft_identity,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_ABORT = 3


def _fail(kind, message, code, details=None):
    payload = {"error": kind, "message": message}
    if details:
        payload["details"] = details
    print(json.dumps(payload), file=sys.stderr)
    return code


def _csv_row(values):
    return ",".join(
        repr(float(v)) if isinstance(v, float) else str(v) for v in values
    )


def _write_csv(path, header, rows):
    with open(path, "w") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(_csv_row(row) + "\n")


def _diagnostics_lines(records):
    lines = [",".join(DiagnosticsRecord.CSV_COLUMNS)]
    lines += [_csv_row(rec.csv_values()) for rec in records]
    return "".join(line + "\n" for line in lines)


def _snapshot_name(step_index):
    return f"snapshot_{step_index:08d}.json"


def _is_diagnostics_step(step_index, integrator, n_steps):
    return (
        step_index == 0
        or step_index == n_steps
        or step_index % integrator.diagnostics_every == 0
    )


def cmd_simulate(args):
    text = Path(args.config).read_text()
    config = parse_config(text)
    outdir = Path(args.output_dir or config.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "snapshots").mkdir(exist_ok=True)

    traj = run(config)

    canonical = serialize_config(config)
    n_steps = config.integrator.n_steps()
    for step_index, state in zip(traj.record_steps, traj.states):
        save_sheet(state, outdir / "snapshots" / _snapshot_name(step_index))
    diag_rows = [
        rec
        for step_index, rec in zip(traj.record_steps, traj.diagnostics)
        if _is_diagnostics_step(step_index, config.integrator, n_steps)
    ]
    (outdir / "diagnostics.csv").write_text(_diagnostics_lines(diag_rows))
    manifest = {
        "run_id": hashlib.sha256(canonical.encode()).hexdigest()[:12],
        "config": canonical,
        "n_steps": n_steps,
        "recorded_steps": traj.record_steps,
        "abort": None
        if traj.abort is None
        else {
            "step": traj.abort.step,
            "time": traj.abort.time,
            "reason": traj.abort.reason,
        },
        "created_unix": time.time(),
    }
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")

    if traj.abort is not None:
        return _fail(
            "abort",
            f"run aborted at step {traj.abort.step} (t={traj.abort.time}): "
            f"{traj.abort.reason}",
            EXIT_ABORT,
        )
    if not args.quiet:
        print(
            f"completed {config.integrator.n_steps()} steps; "
            f"{len(traj.diagnostics)} diagnostics rows -> {outdir}"
        )
    return EXIT_OK


def cmd_replay(args):
    rundir = Path(args.run_dir)
    manifest = json.loads((rundir / "manifest.json").read_text())
    config = parse_config(manifest["config"])
    integ = config.integrator
    n_steps = integ.n_steps()

    initial = load_sheet(rundir / "snapshots" / _snapshot_name(0))
    monitor = None
    if config.kernel.kind == "br_alpha":
        monitor = PairSeparationMonitor(
            initial, config.separation, config.kernel.alpha
        )
    records = []
    for step_index in manifest["recorded_steps"]:
        if not _is_diagnostics_step(step_index, integ, n_steps):
            continue
        state = load_sheet(rundir / "snapshots" / _snapshot_name(step_index))
        t = step_index * integ.dt
        margin = (
            monitor.min_margin(state, t) if monitor is not None else float("nan")
        )
        records.append(compute_record(state, t, config.beta, margin))
    out = Path(args.output) if args.output else rundir / "diagnostics_replay.csv"
    out.write_text(_diagnostics_lines(records))
    if not args.quiet:
        print(f"replayed {len(records)} diagnostics rows -> {out}")
    return EXIT_OK


def _parse_list(text, cast):
    return [cast(part) for part in text.split(",") if part]


def cmd_stability(args):
    kinds = _parse_list(args.kind, str)
    ks = _parse_list(args.k, float)
    rows = []
    for kind in kinds:
        if kind == "br_alpha":
            scales = _parse_list(args.alpha, float) if args.alpha else []
            if not scales:
                raise ConfigError([(0, "br_alpha rows need --alpha")])
            rate = lambda k, s: br_alpha_growth_rate(k, args.gamma0, s)
        elif kind == "blob":
            scales = _parse_list(args.delta, float) if args.delta else []
            if not scales:
                raise ConfigError([(0, "blob rows need --delta")])
            rate = lambda k, s: blob_growth_rate(k, args.gamma0, s)
        elif kind == "euler":
            scales = [0.0]
            rate = lambda k, s: euler_growth_rate(k, args.gamma0)
        else:
            raise ConfigError([(0, f"unknown kind {kind!r}")])
        for scale in scales:
            for k in ks:
                rows.append((kind, k, args.gamma0, scale, rate(k, scale)))
    _emit_table(args, ("kind", "k", "gamma0", "scale", "lambda"), rows)
    return EXIT_OK


def cmd_verify_ft(args):
    alphas = _parse_list(args.alpha, float)
    ks = _parse_list(args.k, float)
    rows = []
    for alpha in alphas:
        for k in ks:
            residual = verify_ft_identity(k, alpha)
            rows.append((k, alpha, alpha * k, residual))
    _emit_table(args, ("k", "alpha", "alpha_k", "residual"), rows)
    return EXIT_OK


def cmd_kernel_table(args):
    if args.x_min <= 0 or args.x_max <= args.x_min:
        raise ConfigError([(0, "need 0 < x-min < x-max")])
    if args.log:
        xs = np.geomspace(args.x_min, args.x_max, args.count)
    else:
        xs = np.linspace(args.x_min, args.x_max, args.count)
    rows = [(float(x), bessel_k0(float(x)), bessel_k1(float(x))) for x in xs]
    _emit_table(args, ("x", "k0", "k1"), rows)
    return EXIT_OK


def _smooth_test_sheet(n):
    # closed analytic curve, safely self-avoiding
    from .sheet import VortexSheet

    theta = 2.0 * np.pi * np.arange(n) / n
    nodes = np.column_stack(
        [
            np.cos(theta) + 0.1 * np.cos(2 * theta),
            1.1 * np.sin(theta),
        ]
    )
    return VortexSheet(nodes, 0.0, 2.0 * np.pi, "closed")


def spatial_orders(ns=(64, 128, 256, 512), alpha=0.4, ref_n=2048):
    """Velocity errors and observed orders on a smooth closed sheet,
    against a fine-grid reference restricted to the coarse nodes."""
    params = KernelParams("br_alpha", alpha=alpha)
    ref = sheet_velocity(_smooth_test_sheet(ref_n), params)
    errors = []
    for n in ns:
        u = sheet_velocity(_smooth_test_sheet(n), params)
        sub = ref[:: ref_n // n]
        errors.append(float(np.abs(u - sub).max()))
    orders = [float("nan")] + [
        float(np.log2(errors[i - 1] / errors[i])) for i in range(1, len(errors))
    ]
    return list(ns), errors, orders


def temporal_orders(dts=(0.1, 0.05, 0.025), n=64, alpha=0.4, t_end=0.5):
    """RK4 global errors and observed orders on a smooth closed-sheet
    problem, against a dt/16 reference."""
    from .evolve import step

    params = KernelParams("br_alpha", alpha=alpha)

    def integrate(dt):
        state = _smooth_test_sheet(n)
        for _ in range(int(round(t_end / dt))):
            state = step(state, params, dt)
        return state.nodes

    ref = integrate(min(dts) / 16.0)
    errors = [float(np.abs(integrate(dt) - ref).max()) for dt in dts]
    orders = [float("nan")] + [
        float(np.log2(errors[i - 1] / errors[i])) for i in range(1, len(errors))
    ]
    return list(dts), errors, orders


def cmd_convergence(args):
    rows = []
    if args.study in ("spatial", "both"):
        ns, errs, orders = spatial_orders()
        rows += [
            ("spatial", float(n), e, o) for n, e, o in zip(ns, errs, orders)
        ]
    if args.study in ("temporal", "both"):
        dts, errs, orders = temporal_orders()
        rows += [("temporal", dt, e, o) for dt, e, o in zip(dts, errs, orders)]
    _emit_table(args, ("study", "refinement", "error", "observed_order"), rows)
    return EXIT_OK


def _emit_table(args, header, rows):
    if getattr(args, "output", None):
        _write_csv(args.output, header, rows)
        if not args.quiet:
            print(f"wrote {len(rows)} rows -> {args.output}")
    else:
        print(",".join(header))
        for row in rows:
            print(_csv_row(row))


def _add_common(sub):
    sub.add_argument("--output-dir", default=None, help="override output directory")
    sub.add_argument("--quiet", action="store_true", help="suppress progress text")
    sub.add_argument(
        "--threads",
        type=int,
        default=0,
        help="numba thread count (0 = automatic)",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bralpha",
        description="Smoothed vortex-sheet dynamics: simulation, linear "
        "stability tables, kernel verification, convergence studies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a simulation config")
    p.add_argument("--config", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("stability", help="dispersion-curve table")
    p.add_argument("--kind", default="br_alpha", help="comma list: euler,br_alpha,blob")
    p.add_argument("--gamma0", type=float, default=1.0)
    p.add_argument("--alpha", default=None, help="comma list of alpha values")
    p.add_argument("--delta", default=None, help="comma list of delta values")
    p.add_argument("--k", required=True, help="comma list of wavenumbers")
    p.add_argument("--output", default=None, help="CSV path (default stdout)")
    _add_common(p)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("verify-ft", help="kernel Fourier-transform residuals")
    p.add_argument("--alpha", required=True, help="comma list")
    p.add_argument("--k", required=True, help="comma list")
    p.add_argument("--output", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_verify_ft)

    p = sub.add_parser("kernel-table", help="dump (x, K0, K1) samples")
    p.add_argument("--x-min", type=float, required=True)
    p.add_argument("--x-max", type=float, required=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--log", action="store_true", help="log-spaced samples")
    p.add_argument("--output", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_kernel_table)

    p = sub.add_parser("convergence", help="refinement studies with observed orders")
    p.add_argument("--study", choices=("spatial", "temporal", "both"), default="both")
    p.add_argument("--output", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("replay", help="recompute diagnostics from stored snapshots")
    p.add_argument("--run-dir", required=True)
    p.add_argument("--output", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_replay)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _backend.set_threads(args.threads)
    try:
        return args.func(args)
    except ConfigError as exc:
        return _fail(
            "validation",
            "configuration invalid",
            EXIT_VALIDATION,
            details=[{"line": ln, "message": msg} for ln, msg in exc.errors],
        )
    except FileNotFoundError as exc:
        return _fail("validation", str(exc), EXIT_VALIDATION)
    except ValueError as exc:
        return _fail("validation", str(exc), EXIT_VALIDATION)
    except RuntimeError as exc:
        return _fail("runtime", str(exc), EXIT_ABORT)


if __name__ == "__main__":
    sys.exit(main())
