"""Run configuration files.

Configs are flat ``key = value`` files with one section per concern::

    [lip]       z_c, g
    [target]    T_sd, xd_d
    [bounds]    T_min, T_max, L_max   (or theta_m instead of L_max)
    [weights]   W1, W2, Q             (two comma-separated diagonal entries)
    [scenario]  approach, x0, dt_control, dt_int, t_end
    [fall]      x_limit, v_limit
    [push NAME] t_start, duration, accel   (any number of these)
    [grid]      x_lo, x_hi, x_step, v_lo, v_hi, v_step
    [scan]      T_elap

All values are SI (m, s, m/s, m/s^2, rad).  Missing keys take the library
defaults; unknown sections or keys are rejected.
"""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .lip import ComState, GaitTarget, LipParams
from .optimizers import CostWeights, StepBounds
from .scanner import GridSpec, ProblemConfig
from .simulator import FallLimits, PushEvent, Scenario

BUNDLED = ("nominal", "backward_push", "forward_push")

_FLOAT_KEYS = {
    "lip": ("z_c", "g"),
    "target": ("T_sd", "xd_d"),
    "bounds": ("T_min", "T_max", "L_max", "theta_m"),
    "scenario": ("dt_control", "dt_int", "t_end"),
    "fall": ("x_limit", "v_limit"),
    "grid": ("x_lo", "x_hi", "x_step", "v_lo", "v_hi", "v_step"),
    "scan": ("T_elap",),
    "push": ("t_start", "duration", "accel"),
}
_PAIR_KEYS = {"weights": ("W1", "W2", "Q"), "scenario": ("x0",)}
_STR_KEYS = {"scenario": ("approach",)}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    problem: ProblemConfig = field(default_factory=ProblemConfig)
    scenario: Scenario = field(default_factory=Scenario)
    grid: GridSpec = field(default_factory=GridSpec)


def _float(section, key, raw):
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: expected a number, got {raw!r}") from None


def _pair(section, key, raw):
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 2:
        raise ConfigError(f"[{section}] {key}: expected two comma-separated numbers, got {raw!r}")
    return tuple(_float(section, key, p) for p in parts)


def _read_section(parser, name, kind):
    allowed = set(_FLOAT_KEYS.get(kind, ())) | set(_PAIR_KEYS.get(kind, ())) | set(_STR_KEYS.get(kind, ()))
    out = {}
    for key, raw in parser.items(name):
        if key not in allowed:
            raise ConfigError(f"[{name}] unknown key {key!r}")
        if key in _FLOAT_KEYS.get(kind, ()):
            out[key] = _float(name, key, raw)
        elif key in _PAIR_KEYS.get(kind, ()):
            out[key] = _pair(name, key, raw)
        else:
            out[key] = raw.strip()
    return out


def _build(name, factory, **kw):
    try:
        return factory(**kw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{name}] {exc}") from None


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None, default_section="__none__")
    parser.optionxform = str  # keys are case-sensitive (T_min, W1, ...)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None

    sections = {}
    pushes = []
    for name in parser.sections():
        if name.startswith("push"):
            vals = _read_section(parser, name, "push")
            missing = {"t_start", "duration", "accel"} - set(vals)
            if missing:
                raise ConfigError(f"[{name}] missing {', '.join(sorted(missing))}")
            pushes.append(_build(name, PushEvent, **vals))
        elif name in _FLOAT_KEYS or name in _PAIR_KEYS:
            sections[name] = _read_section(parser, name, name)
        else:
            raise ConfigError(f"unknown section [{name}]")

    lip = _build("lip", LipParams, **sections.get("lip", {}))
    target = _build("target", GaitTarget, **sections.get("target", {}))
    b = dict(sections.get("bounds", {}))
    theta = b.pop("theta_m", None)
    if theta is not None:
        if "L_max" in b:
            raise ConfigError("[bounds] give either L_max or theta_m, not both")
        bounds = _build("bounds", StepBounds.from_friction_cone, theta_m=theta, z_c=lip.z_c, **b)
    else:
        bounds = _build("bounds", StepBounds, **b)
    weights = _build("weights", CostWeights, **sections.get("weights", {}))
    fall = _build("fall", FallLimits, **sections.get("fall", {}))
    grid = _build("grid", GridSpec, **sections.get("grid", {}))
    scan = sections.get("scan", {})
    problem = ProblemConfig(lip, target, bounds, weights, scan.get("T_elap"))

    sc = dict(sections.get("scenario", {}))
    if "x0" in sc:
        sc["x0"] = ComState(*sc["x0"])
    scenario = _build("scenario", Scenario, lip=lip, target=target, bounds=bounds, weights=weights,
                      pushes=tuple(pushes), fall_limits=fall, **sc)
    return RunConfig(problem, scenario, grid)


def load_config(path) -> RunConfig:
    """Load a config file; a bundled scenario name (e.g. ``backward_push``) also works."""
    p = Path(path)
    if not p.exists() and str(path) in BUNDLED:
        return parse_config(bundled_text(str(path)), source=str(path))
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, source=str(path))


def bundled_text(name: str) -> str:
    return resources.files("lipstep.configs").joinpath(f"{name}.ini").read_text()


def with_scenario(cfg: RunConfig, **changes) -> RunConfig:
    return dataclasses.replace(cfg, scenario=dataclasses.replace(cfg.scenario, **changes))
