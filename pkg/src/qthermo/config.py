"""Flat key = value experiment configuration: parsing and validation.

Sections are [channel], [initial_state], [run] for simulations and
[channel], [scan] for non-Markovianity scans.  Unknown sections, unknown
keys, and out-of-range values are rejected before any computation starts.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass

import numpy as np

from . import dynamics
from .dynamics import ChannelSpec
from .errors import ConfigError
from .opcore import spherical_to_bloch
from .thermo import Formulation

_CHANNEL_KEYS = {
    dynamics.GAD: {"kind", "omega0", "gamma0", "te"},
    dynamics.PD_MARKOV: {"kind", "omega0", "gamma", "omega"},
    dynamics.PD_NONMARKOV: {"kind", "omega0", "s", "kappa", "omega_c"},
}
_STATE_KEYS_CART = {"x0", "y0", "z0"}
_STATE_KEYS_SPHER = {"r0", "theta0", "phi0"}
_RUN_KEYS = {"t_max", "dt", "formulations", "emit_plot_script", "outputs"}
_SCAN_KEYS = {"s_min", "s_max", "s_step", "tau_max"}
_BOOL = {"true": True, "yes": True, "1": True,
         "false": False, "no": False, "0": False}


@dataclass(frozen=True)
class ExperimentConfig:
    channel: ChannelSpec
    initial_state: np.ndarray
    t_max: float
    dt: float
    formulations: tuple = tuple(Formulation)
    emit_plot_script: bool = False
    outputs: str | None = None


@dataclass(frozen=True)
class ScanConfig:
    channel: ChannelSpec
    s_min: float
    s_max: float
    s_step: float
    tau_max: float = 50.0
    outputs: str | None = None


def _read(path: str) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"),
                                       interpolation=None, strict=True)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    return parser


def _float(section, key: str) -> float:
    raw = section[key]
    try:
        value = float("inf") if raw.lower() in ("inf", "infinite") else float(raw)
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: not a number: {raw!r}") from exc
    if math.isnan(value):
        raise ConfigError(f"key {key!r}: nan is not allowed")
    return value


def _check_keys(section, allowed: set, name: str):
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in [{name}]: {sorted(unknown)}")


def _parse_channel(parser) -> ChannelSpec:
    if not parser.has_section("channel"):
        raise ConfigError("missing [channel] section")
    sec = parser["channel"]
    kind = sec.get("kind", "").strip().lower()
    if kind not in _CHANNEL_KEYS:
        raise ConfigError(f"unknown channel kind {kind!r} "
                          f"(expected one of {sorted(_CHANNEL_KEYS)})")
    _check_keys(sec, _CHANNEL_KEYS[kind], "channel")
    kwargs = {}
    for key in _CHANNEL_KEYS[kind] - {"kind"}:
        if key in sec:
            kwargs["Te" if key == "te" else key] = _float(sec, key)
    try:
        return ChannelSpec(kind=kind, **kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_state(parser) -> np.ndarray:
    if not parser.has_section("initial_state"):
        raise ConfigError("missing [initial_state] section")
    sec = parser["initial_state"]
    keys = set(sec)
    if keys <= _STATE_KEYS_CART and keys:
        vec = np.array([_float(sec, k) if k in sec else 0.0
                        for k in ("x0", "y0", "z0")])
    elif keys <= _STATE_KEYS_SPHER and keys:
        r0 = _float(sec, "r0") if "r0" in sec else 0.0
        theta0 = _float(sec, "theta0") if "theta0" in sec else 0.0
        phi0 = _float(sec, "phi0") if "phi0" in sec else 0.0
        if not 0.0 <= r0 <= 1.0:
            raise ConfigError(f"r0 = {r0} outside [0, 1]")
        vec = spherical_to_bloch(r0, theta0, phi0)
    else:
        raise ConfigError(
            "initial_state must use x0/y0/z0 or r0/theta0/phi0, "
            f"got {sorted(keys)}")
    if np.linalg.norm(vec) > 1.0 + 1e-10:
        raise ConfigError(f"initial Bloch vector norm {np.linalg.norm(vec)} "
                          "exceeds 1")
    return vec


def load_experiment(path: str) -> ExperimentConfig:
    parser = _read(path)
    extra = set(parser.sections()) - {"channel", "initial_state", "run"}
    if extra:
        raise ConfigError(f"unknown section(s): {sorted(extra)}")
    channel = _parse_channel(parser)
    state = _parse_state(parser)
    if not parser.has_section("run"):
        raise ConfigError("missing [run] section")
    run = parser["run"]
    _check_keys(run, _RUN_KEYS, "run")
    if "t_max" not in run or "dt" not in run:
        raise ConfigError("[run] must define t_max and dt")
    t_max = _float(run, "t_max")
    dt = _float(run, "dt")
    if dt <= 0.0 or t_max < dt:
        raise ConfigError(f"need dt > 0 and t_max >= dt, got dt={dt}, "
                          f"t_max={t_max}")
    formulations = tuple(Formulation)
    if "formulations" in run:
        names = [x.strip() for x in run["formulations"].split(",") if x.strip()]
        try:
            formulations = tuple(Formulation(n) for n in names)
        except ValueError as exc:
            raise ConfigError(f"unknown formulation in {names}") from exc
        if not formulations:
            raise ConfigError("formulations list is empty")
    emit = False
    if "emit_plot_script" in run:
        raw = run["emit_plot_script"].strip().lower()
        if raw not in _BOOL:
            raise ConfigError(f"emit_plot_script: not a boolean: {raw!r}")
        emit = _BOOL[raw]
    outputs = run["outputs"].strip() if "outputs" in run else None
    return ExperimentConfig(channel=channel, initial_state=state,
                            t_max=t_max, dt=dt, formulations=formulations,
                            emit_plot_script=emit, outputs=outputs)


def load_scan(path: str) -> ScanConfig:
    parser = _read(path)
    extra = set(parser.sections()) - {"channel", "scan"}
    if extra:
        raise ConfigError(f"unknown section(s): {sorted(extra)}")
    channel = _parse_channel(parser)
    if channel.kind != dynamics.PD_NONMARKOV:
        raise ConfigError("nm-scan requires a pd_nonmarkov channel")
    if not parser.has_section("scan"):
        raise ConfigError("missing [scan] section")
    sec = parser["scan"]
    _check_keys(sec, _SCAN_KEYS, "scan")
    for key in ("s_min", "s_max", "s_step"):
        if key not in sec:
            raise ConfigError(f"[scan] must define {key}")
    s_min = _float(sec, "s_min")
    s_max = _float(sec, "s_max")
    s_step = _float(sec, "s_step")
    tau_max = _float(sec, "tau_max") if "tau_max" in sec else 50.0
    if s_min <= 0.0 or s_max < s_min or s_step <= 0.0:
        raise ConfigError("need 0 < s_min <= s_max and s_step > 0")
    if tau_max <= 0.0:
        raise ConfigError("tau_max must be positive")
    return ScanConfig(channel=channel, s_min=s_min, s_max=s_max,
                      s_step=s_step, tau_max=tau_max)
