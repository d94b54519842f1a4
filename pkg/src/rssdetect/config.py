"""YAML run configuration.  Physical keys carry their unit in the name (power_dbm, freq_ghz...)."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .channel import NetworkConfig, dbm_to_watts
from .errors import InvalidParams
from .geometry import PRESETS, EnvironmentProfile, horizontal_distance_for_elevation

ENV_SEED = "RSSDETECT_SEED"
ENV_OUT = "RSSDETECT_OUT"


@dataclass
class RunConfig:
    network: NetworkConfig
    environments: list
    seed: int = 0
    method: str = "auto"
    mc_samples: int = 200_000
    output_dir: Path = Path("out")
    blocks: dict = field(default_factory=dict)

    def block(self, name: str) -> dict:
        return self.blocks.get(name) or {}


def parse_network(d: dict) -> NetworkConfig:
    return NetworkConfig(
        lam=float(d.get("density_per_m2", 1e-5)),
        p_u=dbm_to_watts(float(d.get("ue_power_dbm", 20.0))),
        # drone_power_w allows an exact zero (signal-free runs)
        p_d=float(d["drone_power_w"]) if "drone_power_w" in d
        else dbm_to_watts(float(d.get("drone_power_dbm", 20.0))),
        f_c=float(d.get("freq_ghz", 5.8)) * 1e9,
        n0=float(d.get("noise_w_per_hz", 1e-17)),
        h=float(d.get("altitude_m", 300.0)),
        rho=float(d.get("rho", 1.0)),
        rho_mode=str(d.get("rho_mode", "fixed-one")),
    )


def parse_environment(item) -> EnvironmentProfile:
    if isinstance(item, str):
        try:
            return PRESETS[item]
        except KeyError:
            raise InvalidParams(f"unknown environment preset {item!r}") from None
    if isinstance(item, dict):
        if "preset" in item:
            base = parse_environment(item["preset"])
            overrides = {k: v for k, v in item.items() if k != "preset"}
            merged = {**base.to_dict(), **overrides}
            return EnvironmentProfile.from_dict(merged)
        return EnvironmentProfile.from_dict(item)
    raise InvalidParams(f"cannot parse environment entry {item!r}")


def number_grid(spec) -> list:
    """A list of numbers, or {start, stop, num[, log]} (log-spaced by default)."""
    if spec is None:
        return []
    if isinstance(spec, dict):
        start, stop, num = float(spec["start"]), float(spec["stop"]), int(spec["num"])
        if spec.get("log", True):
            return [float(x) for x in np.logspace(math.log10(start), math.log10(stop), num)]
        return [float(x) for x in np.linspace(start, stop, num)]
    if isinstance(spec, (int, float)):
        return [float(spec)]
    return [float(x) for x in spec]


def horizontal_distance(block: dict, h: float) -> float:
    if "horizontal_distance_m" in block:
        return float(block["horizontal_distance_m"])
    if "elevation_deg" in block:
        return horizontal_distance_for_elevation(float(block["elevation_deg"]), h)
    return 923.0


def load_config(path, *, seed=None, out=None, method=None) -> RunConfig:
    with open(path) as fh:
        raw = yaml.safe_load(fh) or {}
    if not isinstance(raw, dict):
        raise InvalidParams("config root must be a mapping")
    envs = [parse_environment(e) for e in raw.get("environments", ["suburban"])]
    if seed is None and os.environ.get(ENV_SEED):
        seed = int(os.environ[ENV_SEED])
    if out is None and os.environ.get(ENV_OUT):
        out = os.environ[ENV_OUT]
    blocks = {k: v for k, v in raw.items()
              if k in ("roc", "sweep_density", "optimize", "validate", "xi_table")}
    return RunConfig(
        network=parse_network(raw.get("network", {})),
        environments=envs,
        seed=int(seed if seed is not None else raw.get("seed", 0)),
        method=str(method or raw.get("method", "auto")),
        mc_samples=int(raw.get("mc_samples", 200_000)),
        output_dir=Path(out if out is not None else raw.get("output_dir", "out")),
        blocks=blocks,
    )
