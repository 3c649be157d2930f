"""Run configuration: structured TOML file with CLI flag overrides.

Unknown tables or keys are rejected before any allocation; the full
effective configuration is echoed into every report header.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .dynamics import ConfigError, EvolutionConfig
from .lattice import ModelParams

_SCHEMA = {
    "model": {"kind", "n", "q", "m"},
    "lattice": {"sites", "spacing"},
    "initial": {"kind", "amplitude", "k", "k2", "background"},
    "evolution": {"dt", "steps", "cadence"},
    "check": {"samples", "refine", "max_mode", "gauge_amplitude", "algebraic_only"},
    "output": {"dir", "csv", "figures", "snapshot"},
}
_TOP_KEYS = {"seed"}


@dataclass(frozen=True)
class RunConfig:
    model: str = "u1"
    n: int = 1
    q: float = 0.5
    m: float = 1.0
    sites: int = 64
    spacing: float = 0.25
    initial: str = "coupled_wave"
    amplitude: float = 0.1
    k: int = 1
    k2: int = 2
    background: float = 0.0
    dt: float = 0.125
    steps: int = 100
    cadence: int = 1
    samples: int = 20
    refine: int = 1
    max_mode: int = 3
    gauge_amplitude: float = 0.5
    algebraic_only: bool = False
    out_dir: str = "."
    csv_name: str = "diagnostics.csv"
    figures: bool = True
    snapshot: str = ""
    seed: int = 0

    def __post_init__(self):
        if self.model not in ("u1", "sun"):
            raise ConfigError(f"model must be 'u1' or 'sun', got {self.model!r}")
        if self.model == "u1" and self.n != 1:
            raise ConfigError("the u1 model requires N = 1")
        if not 1 <= self.n <= 4:
            raise ConfigError(f"internal dimension must be 1..4, got {self.n}")
        if self.sites < 8:
            raise ConfigError(f"need at least 8 spatial sites, got {self.sites}")
        if self.spacing <= 0:
            raise ConfigError("lattice spacing must be positive")
        if self.initial not in ("zero", "plane_wave", "coupled_wave"):
            raise ConfigError(f"unknown initial condition {self.initial!r}")
        if self.m < 0:
            raise ConfigError("mass must be nonnegative")
        if self.steps < 3:
            raise ConfigError("need at least 3 evolution steps")
        if self.refine < 1:
            raise ConfigError("refine must be >= 1")
        if self.samples < 1:
            raise ConfigError("samples must be >= 1")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")

    @property
    def params(self) -> ModelParams:
        return ModelParams(n=self.n, q=self.q, m=self.m)

    def evolution(self) -> EvolutionConfig:
        return EvolutionConfig(dt=self.dt, n_steps=self.steps, cadence=self.cadence)

    def effective_lines(self) -> list[str]:
        return [f"{f.name} = {getattr(self, f.name)!r}" for f in fields(self)]

    def with_overrides(self, seed=None, out_dir=None, refine=None,
                       algebraic_only=None, figures=None) -> "RunConfig":
        updates = {}
        if seed is not None:
            updates["seed"] = seed
        if out_dir is not None:
            updates["out_dir"] = str(out_dir)
        if refine is not None:
            updates["refine"] = refine
        if algebraic_only is not None:
            updates["algebraic_only"] = algebraic_only
        if figures is not None:
            updates["figures"] = figures
        return replace(self, **updates) if updates else self


def load_config(path) -> RunConfig:
    try:
        raw = tomllib.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config parse error: {exc}") from None

    values = {}
    for key, val in raw.items():
        if key in _TOP_KEYS:
            values[key] = val
            continue
        if key not in _SCHEMA:
            raise ConfigError(f"unknown config table [{key}]")
        if not isinstance(val, dict):
            raise ConfigError(f"config key {key!r} must be a table")
        unknown = set(val) - _SCHEMA[key]
        if unknown:
            raise ConfigError(f"unknown key(s) {sorted(unknown)} in table [{key}]")
        for sub, subval in val.items():
            values[(key, sub)] = subval

    mapping = {
        ("model", "kind"): "model", ("model", "n"): "n",
        ("model", "q"): "q", ("model", "m"): "m",
        ("lattice", "sites"): "sites", ("lattice", "spacing"): "spacing",
        ("initial", "kind"): "initial", ("initial", "amplitude"): "amplitude",
        ("initial", "k"): "k", ("initial", "k2"): "k2",
        ("initial", "background"): "background",
        ("evolution", "dt"): "dt", ("evolution", "steps"): "steps",
        ("evolution", "cadence"): "cadence",
        ("check", "samples"): "samples", ("check", "refine"): "refine",
        ("check", "max_mode"): "max_mode",
        ("check", "gauge_amplitude"): "gauge_amplitude",
        ("check", "algebraic_only"): "algebraic_only",
        ("output", "dir"): "out_dir", ("output", "csv"): "csv_name",
        ("output", "figures"): "figures", ("output", "snapshot"): "snapshot",
        "seed": "seed",
    }
    kwargs = {}
    for key, val in values.items():
        kwargs[mapping[key]] = val
    try:
        return RunConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"invalid config value types: {exc}") from None
