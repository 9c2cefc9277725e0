"""Smoothed vortex-sheet dynamics.

Evolves circulation-parameterized sheets under the Helmholtz-filtered
Biot-Savart kernel, evaluates the flat-sheet linear-stability spectrum,
and monitors the regularity quantities (chord-arc constant, Hölder
semi-norms, curvature, pair-separation bounds) along trajectories.
"""

from .config import ConfigError, SimulationConfig, parse_config, serialize_config
from .diagnostics import (
    DiagnosticsRecord,
    SeparationBoundConfig,
    curvature,
    holder_seminorm,
    phi_comparison,
    separation_bound_check,
)
from .evolve import IntegratorConfig, Trajectory, run, step
from .kernels import KernelParams, dpsi_alpha, kernel_eval, kernel_eval_periodic, psi_alpha
from .sheet import (
    VortexSheet,
    chord_arc,
    circle_sheet,
    flat_sheet,
    perturbed_flat_sheet,
    resample,
    sheet_velocity,
)
from .specfun import bessel_k0, bessel_k1
from .stability import (
    blob_growth_rate,
    br_alpha_growth_rate,
    d_of_k,
    euler_growth_rate,
    lagrangian_growth_rate,
    measure_growth_rate,
    mode_matrix,
    verify_ft_identity,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DiagnosticsRecord",
    "IntegratorConfig",
    "KernelParams",
    "SeparationBoundConfig",
    "SimulationConfig",
    "Trajectory",
    "VortexSheet",
    "bessel_k0",
    "bessel_k1",
    "blob_growth_rate",
    "br_alpha_growth_rate",
    "chord_arc",
    "circle_sheet",
    "curvature",
    "d_of_k",
    "dpsi_alpha",
    "euler_growth_rate",
    "flat_sheet",
    "holder_seminorm",
    "kernel_eval",
    "kernel_eval_periodic",
    "lagrangian_growth_rate",
    "measure_growth_rate",
    "mode_matrix",
    "parse_config",
    "perturbed_flat_sheet",
    "phi_comparison",
    "psi_alpha",
    "resample",
    "run",
    "separation_bound_check",
    "serialize_config",
    "sheet_velocity",
    "step",
    "verify_ft_identity",
]
