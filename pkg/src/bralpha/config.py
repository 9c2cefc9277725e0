"""Flat key-value simulation configs.

Format: one ``key = value`` per line, ``#`` comments, UTF-8.  Parsing
validates everything it can and reports *all* problems with their line
numbers, not just the first.  ``serialize_config`` emits a canonical
form that round-trips byte-identically through parse -> serialize.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .diagnostics import SeparationBoundConfig
from .evolve import IntegratorConfig
from .kernels import KernelParams
from .sheet import (
    VortexSheet,
    circle_sheet,
    flat_sheet,
    load_sheet,
    perturbed_flat_sheet,
)

IC_KINDS = ("flat", "flat_perturbed", "circle", "graph")


class ConfigError(ValueError):
    """Carries every validation problem as (line_number, message) pairs;
    line 0 marks document-level issues."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__(
            "; ".join(f"line {ln}: {msg}" for ln, msg in self.errors)
        )


@dataclass(frozen=True)
class SimulationConfig:
    ic: str
    kernel: KernelParams
    integrator: IntegratorConfig
    n: int
    gamma0: float
    length: float | None = None
    ic_k: int | None = None
    ic_eps: float | None = None
    ic_eigenvector_seeded: bool = False
    ic_radius: float | None = None
    ic_file: str | None = None
    beta: float = 0.5
    chord_arc_floor: float = 0.0
    separation: SeparationBoundConfig = field(default_factory=SeparationBoundConfig)
    output_dir: str = "out"
    seed: int = 0

    def initial_sheet(self) -> VortexSheet:
        if self.ic == "flat":
            return flat_sheet(self.n, self.length, self.gamma0)
        if self.ic == "flat_perturbed":
            return perturbed_flat_sheet(
                self.n,
                self.length,
                self.gamma0,
                self.ic_k,
                self.ic_eps,
                self.ic_eigenvector_seeded,
            )
        if self.ic == "circle":
            return circle_sheet(self.n, self.ic_radius, self.gamma0)
        sheet = load_sheet(self.ic_file)
        if (sheet.period is None) != (self.kernel.period is None) or (
            sheet.period is not None and sheet.period != self.kernel.period
        ):
            raise ValueError(
                "periodicity of the tabulated sheet does not match the kernel"
            )
        return sheet


# schema: key -> (type tag, required)
_SCHEMA = {
    "ic": "str",
    "ic.k": "int",
    "ic.eps": "float",
    "ic.eigenvector_seeded": "bool",
    "ic.radius": "float",
    "ic.file": "str",
    "kernel.kind": "str",
    "kernel.alpha": "float",
    "kernel.delta": "float",
    "kernel.period": "float",
    "kernel.image_tail_threshold": "float",
    "integrator.method": "str",
    "integrator.dt": "float",
    "integrator.t_end": "float",
    "integrator.diagnostics_every": "int",
    "integrator.snapshot_every": "int",
    "N": "int",
    "L": "float",
    "gamma0": "float",
    "beta": "float",
    "chord_arc_floor": "float",
    "sep.constant_c": "float",
    "sep.vorticity_mass": "float",
    "sep.sample_pairs": "int",
    "output_dir": "str",
    "seed": "int",
}

_REQUIRED = ("ic", "kernel.kind", "integrator.dt", "integrator.t_end", "N", "gamma0")


def _parse_value(kind, raw):
    if kind == "str":
        return raw
    if kind == "int":
        try:
            return int(raw)
        except ValueError:
            raise ValueError(f"expected an integer, got {raw!r}")
    if kind == "float":
        try:
            value = float(raw)
        except ValueError:
            raise ValueError(f"expected a number, got {raw!r}")
        if not math.isfinite(value):
            raise ValueError("value must be finite")
        return value
    if raw in ("true", "false"):
        return raw == "true"
    raise ValueError(f"expected true or false, got {raw!r}")


def _scan(text):
    """First pass: the raw key/value map plus line bookkeeping."""
    values = {}
    lines = {}
    errors = []
    for ln, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            errors.append((ln, "expected 'key = value'"))
            continue
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in _SCHEMA:
            errors.append((ln, f"unknown key {key!r}"))
            continue
        if key in values:
            errors.append((ln, f"duplicate key {key!r}"))
            continue
        try:
            values[key] = _parse_value(_SCHEMA[key], raw)
            lines[key] = ln
        except ValueError as exc:
            errors.append((ln, f"{key}: {exc}"))
    return values, lines, errors


def parse_config(text: str) -> SimulationConfig:
    """Parse and fully validate a config document.

    Raises :class:`ConfigError` carrying every problem found (unknown
    keys, type mismatches, cross-field inconsistencies) with line
    numbers.
    """
    values, lines, errors = _scan(text)

    def complain(key, msg):
        errors.append((lines.get(key, 0), msg))

    for key in _REQUIRED:
        if key not in values:
            errors.append((0, f"missing required key {key!r}"))

    ic = values.get("ic", "flat")
    if ic not in IC_KINDS:
        complain("ic", f"unknown initial condition {ic!r}")
    kind = values.get("kernel.kind")
    if kind == "euler":
        complain(
            "kernel.kind",
            "singular kernel not integrable by this quadrature; "
            "use br_alpha or blob",
        )
    elif kind is not None and kind not in ("br_alpha", "blob"):
        complain("kernel.kind", f"unknown kernel kind {kind!r}")

    n = values.get("N", 4)
    if n < 4:
        complain("N", "N must be >= 4")
    beta = values.get("beta", 0.5)
    if not 0.0 < beta < 1.0:
        complain("beta", "beta must lie in (0, 1)")

    periodic_ic = ic in ("flat", "flat_perturbed")
    length = values.get("L")
    if periodic_ic:
        if length is None:
            complain("ic", f"{ic} requires L")
        elif length <= 0:
            complain("L", "L must be > 0")
        if kind == "blob":
            complain(
                "kernel.kind", "periodic sheets need the br_alpha kernel"
            )
        declared = values.get("kernel.period")
        if declared is not None and length is not None and declared != length:
            complain("kernel.period", "kernel.period must equal L")
    else:
        if values.get("kernel.period") is not None:
            complain("kernel.period", f"{ic} sheets are not x1-periodic")

    if ic == "flat_perturbed":
        if "ic.k" not in values:
            complain("ic", "flat_perturbed requires ic.k")
        elif values["ic.k"] < 1:
            complain("ic.k", "ic.k must be a positive integer")
        if "ic.eps" not in values:
            complain("ic", "flat_perturbed requires ic.eps")
        elif values["ic.eps"] <= 0:
            complain("ic.eps", "ic.eps must be > 0")
    if ic == "circle":
        if "ic.radius" not in values:
            complain("ic", "circle requires ic.radius")
        elif values["ic.radius"] <= 0:
            complain("ic.radius", "ic.radius must be > 0")
    if ic == "graph" and "ic.file" not in values:
        complain("ic", "graph requires ic.file")

    kernel = None
    if not errors:
        try:
            kernel = KernelParams(
                kind=kind,
                alpha=values.get("kernel.alpha"),
                delta=values.get("kernel.delta"),
                period=length if periodic_ic else values.get("kernel.period"),
                image_tail_threshold=values.get(
                    "kernel.image_tail_threshold", 40.0
                ),
            )
        except ValueError as exc:
            complain("kernel.kind", str(exc))

    integrator = None
    if "integrator.dt" in values and "integrator.t_end" in values:
        try:
            integrator = IntegratorConfig(
                dt=values["integrator.dt"],
                t_end=values["integrator.t_end"],
                method=values.get("integrator.method", "rk4"),
                diagnostics_every=values.get("integrator.diagnostics_every", 10),
                snapshot_every=values.get("integrator.snapshot_every", 10),
            )
            integrator.n_steps()
        except ValueError as exc:
            complain("integrator.dt", str(exc))

    separation = None
    try:
        separation = SeparationBoundConfig(
            constant_C=values.get("sep.constant_c", 1.0),
            vorticity_mass=values.get("sep.vorticity_mass"),
            sample_pairs=values.get("sep.sample_pairs", 64),
        )
    except ValueError as exc:
        complain("sep.constant_c", str(exc))

    if errors:
        raise ConfigError(sorted(errors))

    return SimulationConfig(
        ic=ic,
        kernel=kernel,
        integrator=integrator,
        n=n,
        gamma0=values["gamma0"],
        length=length,
        ic_k=values.get("ic.k"),
        ic_eps=values.get("ic.eps"),
        ic_eigenvector_seeded=values.get("ic.eigenvector_seeded", False),
        ic_radius=values.get("ic.radius"),
        ic_file=values.get("ic.file"),
        beta=beta,
        chord_arc_floor=values.get("chord_arc_floor", 0.0),
        separation=separation,
        output_dir=values.get("output_dir", "out"),
        seed=values.get("seed", 0),
    )


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize_config(config: SimulationConfig) -> str:
    """Canonical text form: fixed key order, repr floats, defaults filled.
    parse(serialize(c)) reproduces c and serializes to the same bytes."""
    pairs = [("ic", config.ic)]
    if config.ic == "flat_perturbed":
        pairs += [
            ("ic.k", config.ic_k),
            ("ic.eps", config.ic_eps),
            ("ic.eigenvector_seeded", config.ic_eigenvector_seeded),
        ]
    if config.ic == "circle":
        pairs.append(("ic.radius", config.ic_radius))
    if config.ic == "graph":
        pairs.append(("ic.file", config.ic_file))
    k = config.kernel
    pairs.append(("kernel.kind", k.kind))
    if k.alpha is not None:
        pairs.append(("kernel.alpha", k.alpha))
    if k.delta is not None:
        pairs.append(("kernel.delta", k.delta))
    if k.period is not None and config.ic not in ("flat", "flat_perturbed"):
        pairs.append(("kernel.period", k.period))
    pairs.append(("kernel.image_tail_threshold", k.image_tail_threshold))
    integ = config.integrator
    pairs += [
        ("integrator.method", integ.method),
        ("integrator.dt", integ.dt),
        ("integrator.t_end", integ.t_end),
        ("integrator.diagnostics_every", integ.diagnostics_every),
        ("integrator.snapshot_every", integ.snapshot_every),
        ("N", config.n),
    ]
    if config.length is not None:
        pairs.append(("L", config.length))
    sep = config.separation
    pairs += [
        ("gamma0", config.gamma0),
        ("beta", config.beta),
        ("chord_arc_floor", config.chord_arc_floor),
        ("sep.constant_c", sep.constant_C),
    ]
    if sep.vorticity_mass is not None:
        pairs.append(("sep.vorticity_mass", sep.vorticity_mass))
    pairs += [
        ("sep.sample_pairs", sep.sample_pairs),
        ("output_dir", config.output_dir),
        ("seed", config.seed),
    ]
    return "".join(f"{key} = {_fmt(value)}\n" for key, value in pairs)
