"""Experiment configuration files.

A config is a YAML mapping with three top-level keys::

    scenario: epsilon_scan        # optional; must match the subcommand if given
    parameters:                   # optional; every key here is validated
      N_list: [50, 100, 200, 400, 800]
      xi: 0.5
    output_path: scan.csv         # optional; --out takes precedence

Unknown keys anywhere are rejected. See ``SCHEMAS`` for the parameters each
scenario accepts and their defaults.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .errors import ConfigError

SCENARIOS = ("example1", "spread", "epsilon_scan", "cost_grid", "general_pair")

_COMMON = {
    "width": (float, 1.0),
    "new_width": (float, None),
    "xi": (float, 0.5),
    "constraint_tol": (float, 1e-10),
    "tail_tol": (float, 1e-12),
}

SCHEMAS: dict[str, dict[str, tuple[type, Any]]] = {
    "example1": {**_COMMON, "expect_degenerate": (bool, None)},
    "spread": {**_COMMON, "N": (int, 100)},
    "epsilon_scan": {**_COMMON, "N_list": (list, [50, 100, 200, 400, 800]), "jobs": (int, 1)},
    "cost_grid": {
        "xi_start": (float, 0.01), "xi_stop": (float, 0.99), "xi_step": (float, 0.01),
        "eps_start": (float, 0.0), "eps_stop": (float, 0.5), "eps_step": (float, 0.01),
        "overlap_before": (float, 0.5),
    },
    "general_pair": {**_COMMON, "alpha": (float, 0.6), "N": (int, 50)},
}


@dataclass
class ExperimentConfig:
    scenario: str
    parameters: dict[str, Any] = field(default_factory=dict)
    output_path: str | None = None

    def __getitem__(self, key):
        return self.parameters[key]


def _coerce(name: str, value: Any, kind: type) -> Any:
    # pyyaml reads "1e-10" (no dot) as a string, so numeric strings are accepted
    if kind is bool:
        if isinstance(value, bool):
            return value
        raise ConfigError(f"parameter {name!r} must be true or false, got {value!r}")
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, (int, float, str)):
            raise ConfigError(f"parameter {name!r} must be an integer, got {value!r}")
        try:
            f = float(value)
        except ValueError:
            raise ConfigError(f"parameter {name!r} must be an integer, got {value!r}") from None
        if not f.is_integer():
            raise ConfigError(f"parameter {name!r} must be an integer, got {value!r}")
        return int(f)
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float, str)):
            raise ConfigError(f"parameter {name!r} must be a number, got {value!r}")
        try:
            f = float(value)
        except ValueError:
            raise ConfigError(f"parameter {name!r} must be a number, got {value!r}") from None
        if not math.isfinite(f):
            raise ConfigError(f"parameter {name!r} must be finite")
        return f
    if kind is list:
        if not isinstance(value, list) or not value:
            raise ConfigError(f"parameter {name!r} must be a non-empty list")
        return [_coerce(f"{name}[{i}]", v, int) for i, v in enumerate(value)]
    raise AssertionError(kind)


def _check_ranges(scenario: str, p: dict) -> None:
    def need(cond, msg):
        if not cond:
            raise ConfigError(msg)

    if "width" in p:
        need(p["width"] > 0, "width must be positive")
    if p.get("new_width") is not None:
        need(p["new_width"] > 0, "new_width must be positive")
    if "xi" in p:
        need(0 < p["xi"] < 1, "xi must lie strictly between 0 and 1")
    for key in ("constraint_tol", "tail_tol"):
        if key in p:
            need(0 < p[key] < 1, f"{key} must lie in (0, 1)")
    if "N" in p:
        need(p["N"] >= 3, "N must be >= 3")
    if "N_list" in p:
        need(all(n >= 3 for n in p["N_list"]), "every entry of N_list must be >= 3")
    if "jobs" in p:
        need(p["jobs"] >= 1, "jobs must be >= 1")
    if "alpha" in p:
        need(0 <= p["alpha"] <= 1, "alpha must lie in [0, 1]")
    if scenario == "cost_grid":
        need(0 < p["xi_start"] <= p["xi_stop"] < 1, "xi grid must lie within (0, 1)")
        need(0 <= p["eps_start"] <= p["eps_stop"] <= 1, "epsilon grid must lie within [0, 1]")
        need(p["xi_step"] > 0 and p["eps_step"] > 0, "grid steps must be positive")
        need(0 <= p["overlap_before"] <= 1, "overlap_before must lie in [0, 1]")


def build_config(scenario: str, raw: dict | None = None) -> ExperimentConfig:
    """Validate a raw mapping (already parsed) into an :class:`ExperimentConfig`."""
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}")
    raw = {} if raw is None else raw
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping")
    unknown = set(raw) - {"scenario", "parameters", "output_path"}
    if unknown:
        raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")
    declared = raw.get("scenario")
    if declared is not None and str(declared).replace("-", "_") != scenario:
        raise ConfigError(f"config is for scenario {declared!r}, not {scenario!r}")
    given = raw.get("parameters") or {}
    if not isinstance(given, dict):
        raise ConfigError("'parameters' must be a mapping")
    schema = SCHEMAS[scenario]
    unknown = set(given) - set(schema)
    if unknown:
        raise ConfigError(f"unknown parameters for {scenario}: {sorted(unknown)}")
    params = {}
    for name, (kind, default) in schema.items():
        if name in given and given[name] is not None:
            params[name] = _coerce(name, given[name], kind)
        else:
            params[name] = list(default) if isinstance(default, list) else default
    _check_ranges(scenario, params)
    out = raw.get("output_path")
    if out is not None and not isinstance(out, str):
        raise ConfigError("output_path must be a string")
    return ExperimentConfig(scenario, params, out)


def load_config(path: str | Path, scenario: str) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from None
    return build_config(scenario, raw)
