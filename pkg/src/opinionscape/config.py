"""Configuration schema: a versioned YAML document with strict validation.

Sections: model, dmp, init, landscape, sweep, output, plus top-level
version (required) and seed. Unknown keys and out-of-range values are
rejected before any simulation work starts. Serialization is lossless:
parsing a serialized configuration reproduces identical values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import yaml

from .dmp import DmpParams, InitialStatePolicy, InitPolicyKind
from .engine import DEFAULT_SNAPSHOT_TICKS, SimConfig
from .landscape import FLAT_PARAM_KEYS, Arena, LandscapeKind, landscape_from_flat
from .model import ModelParams
from .sweep import (DEFAULT_P_MAX, DEFAULT_P_MIN, DEFAULT_REPLICATES,
                    DEFAULT_RESOLUTION, SweepSpec, log_grid)

CONFIG_VERSION = 1

_GROUND_TRUTH_ECHO_RTOL = 1e-9


class ConfigError(ValueError):
    """A configuration document failed schema or range validation."""


@dataclass
class SweepSettings:
    """Grid geometry for probability sweeps, expanded to a SweepSpec on use."""

    p_e_min: float = DEFAULT_P_MIN
    p_e_max: float = DEFAULT_P_MAX
    p_m_min: float = DEFAULT_P_MIN
    p_m_max: float = DEFAULT_P_MAX
    resolution: int = DEFAULT_RESOLUTION
    replicates: int = DEFAULT_REPLICATES
    paired_baseline: bool = True

    def build_spec(self) -> SweepSpec:
        pe = log_grid(self.p_e_min, self.p_e_max, self.resolution)
        pm = log_grid(self.p_m_min, self.p_m_max, self.resolution)
        grid = [(float(a), float(b)) for a in pe for b in pm]
        return SweepSpec(grid=grid, replicates=self.replicates,
                         paired_baseline=self.paired_baseline)


@dataclass
class OutputSettings:
    dir: str | None = None


@dataclass
class FullConfig:
    sim: SimConfig = field(default_factory=SimConfig)
    sweep: SweepSettings = field(default_factory=SweepSettings)
    output: OutputSettings = field(default_factory=OutputSettings)


def _section(data: dict, name: str) -> dict:
    raw = data.get(name, {})
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(f"{name}: expected a mapping")
    return raw


def _label(section: str, key: str) -> str:
    return f"{section}.{key}" if section else key


def _reject_unknown(section: str, raw: dict, allowed) -> None:
    unknown = set(raw) - set(allowed)
    if unknown:
        raise ConfigError(f"{_label(section, sorted(unknown)[0])}: unknown key")


def _get_int(section: str, raw: dict, key: str, default: int) -> int:
    v = raw.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(
            f"{_label(section, key)}: expected an integer, got {v!r}")
    return v


def _get_float(section: str, raw: dict, key: str, default: float) -> float:
    v = raw.get(key, default)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(
            f"{_label(section, key)}: expected a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ConfigError(f"{_label(section, key)}: must be finite, got {v!r}")
    return v


def _get_bool(section: str, raw: dict, key: str, default: bool) -> bool:
    v = raw.get(key, default)
    if not isinstance(v, bool):
        raise ConfigError(
            f"{_label(section, key)}: expected true/false, got {v!r}")
    return v


def _get_str(section: str, raw: dict, key: str, default):
    v = raw.get(key, default)
    if v is not None and not isinstance(v, str):
        raise ConfigError(
            f"{_label(section, key)}: expected a string, got {v!r}")
    return v


_MODEL_KEYS = ("n_agents", "r_comm", "alpha", "beta", "r_lambda",
               "step_size", "sigma", "t_final")
_SWEEP_KEYS = ("p_e_min", "p_e_max", "p_m_min", "p_m_max", "resolution",
               "replicates", "paired_baseline")
_OUTPUT_KEYS = ("dir", "metrics_stride", "snapshot_ticks")
_TOP_KEYS = ("version", "seed", "model", "dmp", "init", "landscape",
             "sweep", "output")


def parse_config(data: dict) -> FullConfig:
    """Validate a raw mapping against the schema and resolve all defaults."""
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a mapping")
    _reject_unknown("", data, _TOP_KEYS)
    if "version" not in data:
        raise ConfigError("version: required")
    if data["version"] != CONFIG_VERSION:
        raise ConfigError(
            f"version: expected {CONFIG_VERSION}, got {data['version']!r}")
    seed = _get_int("", data, "seed", 0)

    raw = _section(data, "model")
    _reject_unknown("model", raw, _MODEL_KEYS)
    defaults = ModelParams()
    try:
        model = ModelParams(
            n_agents=_get_int("model", raw, "n_agents", defaults.n_agents),
            r_comm=_get_float("model", raw, "r_comm", defaults.r_comm),
            alpha=_get_float("model", raw, "alpha", defaults.alpha),
            beta=_get_float("model", raw, "beta", defaults.beta),
            r_lambda=_get_float("model", raw, "r_lambda", defaults.r_lambda),
            step_size=_get_float("model", raw, "step_size", defaults.step_size),
            sigma=_get_float("model", raw, "sigma", defaults.sigma),
            t_final=_get_int("model", raw, "t_final", defaults.t_final),
        )
    except ValueError as e:
        raise ConfigError(f"model.{e}") from None

    raw = _section(data, "dmp")
    _reject_unknown("dmp", raw, ("p_e", "p_m"))
    try:
        dmp = DmpParams(p_e=_get_float("dmp", raw, "p_e", 0.0),
                        p_m=_get_float("dmp", raw, "p_m", 0.0))
    except ValueError as e:
        raise ConfigError(f"dmp.{e}") from None

    raw = _section(data, "init")
    _reject_unknown("init", raw, ("policy", "fixed_count"))
    policy_name = _get_str("init", raw, "policy", "stationary_ratio")
    try:
        kind = InitPolicyKind(policy_name)
    except ValueError:
        raise ConfigError(
            f"init.policy: unknown policy {policy_name!r}") from None
    try:
        init_policy = InitialStatePolicy(
            kind=kind, count=_get_int("init", raw, "fixed_count", 0))
    except ValueError as e:
        raise ConfigError(f"init.{e}") from None

    raw = _section(data, "landscape")
    kind_name = _get_str("landscape", raw, "kind", "radial_cone")
    try:
        ls_kind = LandscapeKind(kind_name)
    except ValueError:
        raise ConfigError(
            f"landscape.kind: unknown kind {kind_name!r}") from None
    allowed = ("kind", "width", "height", "ground_truth") + FLAT_PARAM_KEYS[ls_kind]
    _reject_unknown("landscape", raw, allowed)
    try:
        arena = Arena(width=_get_float("landscape", raw, "width", 2.0),
                      height=_get_float("landscape", raw, "height", 2.0))
    except ValueError as e:
        raise ConfigError(f"landscape.{e}") from None
    flat = {k: _get_float("landscape", raw, k, 0.0)
            for k in FLAT_PARAM_KEYS[ls_kind] if k in raw}
    try:
        landscape = landscape_from_flat(ls_kind, arena, flat)
    except ValueError as e:
        raise ConfigError(f"landscape.{e}") from None
    if "ground_truth" in raw:
        given = _get_float("landscape", raw, "ground_truth", 0.0)
        tol = _GROUND_TRUTH_ECHO_RTOL * max(1.0, abs(landscape.ground_truth))
        if abs(given - landscape.ground_truth) > tol:
            raise ConfigError(
                f"landscape.ground_truth: {given!r} does not match the "
                f"computed value {landscape.ground_truth!r}")

    raw = _section(data, "sweep")
    _reject_unknown("sweep", raw, _SWEEP_KEYS)
    sweep = SweepSettings(
        p_e_min=_get_float("sweep", raw, "p_e_min", DEFAULT_P_MIN),
        p_e_max=_get_float("sweep", raw, "p_e_max", DEFAULT_P_MAX),
        p_m_min=_get_float("sweep", raw, "p_m_min", DEFAULT_P_MIN),
        p_m_max=_get_float("sweep", raw, "p_m_max", DEFAULT_P_MAX),
        resolution=_get_int("sweep", raw, "resolution", DEFAULT_RESOLUTION),
        replicates=_get_int("sweep", raw, "replicates", DEFAULT_REPLICATES),
        paired_baseline=_get_bool("sweep", raw, "paired_baseline", True),
    )
    for lo, hi in (("p_e_min", "p_e_max"), ("p_m_min", "p_m_max")):
        if not 0 < getattr(sweep, lo) <= getattr(sweep, hi) <= 1:
            raise ConfigError(
                f"sweep.{lo}: need 0 < {lo} <= {hi} <= 1")
    if sweep.resolution < 1:
        raise ConfigError(
            f"sweep.resolution: must be >= 1, got {sweep.resolution}")
    if sweep.replicates < 1:
        raise ConfigError(
            f"sweep.replicates: must be >= 1, got {sweep.replicates}")

    raw = _section(data, "output")
    _reject_unknown("output", raw, _OUTPUT_KEYS)
    stride = _get_int("output", raw, "metrics_stride", 1000)
    ticks_raw = raw.get("snapshot_ticks", list(DEFAULT_SNAPSHOT_TICKS))
    if not isinstance(ticks_raw, (list, tuple)):
        raise ConfigError("output.snapshot_ticks: expected a list of integers")
    ticks = []
    for t in ticks_raw:
        if isinstance(t, bool) or not isinstance(t, int) or t < 0:
            raise ConfigError(
                f"output.snapshot_ticks: expected integers >= 0, got {t!r}")
        ticks.append(t)
    out = OutputSettings(dir=_get_str("output", raw, "dir", None))

    sim = SimConfig(model=model, dmp=dmp, init_policy=init_policy,
                    landscape=landscape, master_seed=seed,
                    metrics_stride=stride, snapshot_ticks=tuple(ticks))
    try:
        sim.validate()
    except ValueError as e:
        raise ConfigError(str(e)) from None
    return FullConfig(sim=sim, sweep=sweep, output=out)


def config_to_dict(full: FullConfig) -> dict:
    """The fully resolved document, every key explicit, ready to serialize.

    Includes the landscape's computed ground_truth as an annotation; the
    parser accepts it back and checks it for consistency.
    """
    sim = full.sim
    ls = sim.landscape
    return {
        "version": CONFIG_VERSION,
        "seed": sim.master_seed,
        "model": {
            "n_agents": sim.model.n_agents,
            "r_comm": sim.model.r_comm,
            "alpha": sim.model.alpha,
            "beta": sim.model.beta,
            "r_lambda": sim.model.r_lambda,
            "step_size": sim.model.step_size,
            "sigma": sim.model.sigma,
            "t_final": sim.model.t_final,
        },
        "dmp": {"p_e": sim.dmp.p_e, "p_m": sim.dmp.p_m},
        "init": {"policy": sim.init_policy.kind.value,
                 "fixed_count": sim.init_policy.count},
        "landscape": {
            "kind": ls.kind.value,
            "width": ls.arena.width,
            "height": ls.arena.height,
            **{k: float(v) for k, v in sorted(ls.params.items())},
            "ground_truth": ls.ground_truth,
        },
        "sweep": {
            "p_e_min": full.sweep.p_e_min,
            "p_e_max": full.sweep.p_e_max,
            "p_m_min": full.sweep.p_m_min,
            "p_m_max": full.sweep.p_m_max,
            "resolution": full.sweep.resolution,
            "replicates": full.sweep.replicates,
            "paired_baseline": full.sweep.paired_baseline,
        },
        "output": {
            "dir": full.output.dir,
            "metrics_stride": sim.metrics_stride,
            "snapshot_ticks": [int(t) for t in sim.snapshot_ticks],
        },
    }


def serialize_config(full: FullConfig) -> str:
    return yaml.safe_dump(config_to_dict(full), sort_keys=True,
                          default_flow_style=False)


def load_config(path: str) -> FullConfig:
    """Read and validate a configuration file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from None
    except yaml.YAMLError as e:
        raise ConfigError(f"malformed YAML in {path}: {e}") from None
    if data is None:
        raise ConfigError(f"config file {path} is empty")
    return parse_config(data)


def default_config() -> FullConfig:
    return parse_config({"version": CONFIG_VERSION})
