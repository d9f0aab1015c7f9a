"""Experiment configuration: one dataclass mirroring the CLI config file.

A config JSON file carries the same field names; ranges are two-element
[low, high] arrays and dims is a nested object.
"""

import json
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

from .channels import Dimensions

RB_BANDWIDTH_HZ = 150e3  # one radio resource block

KB = 8 * 1024           # bits
MB = 8 * 1024 ** 2      # bits


@dataclass(frozen=True)
class ExperimentConfig:
    """Full parameterization of a Monte Carlo experiment."""

    dims: Dimensions = field(default_factory=lambda: Dimensions(n_irs=40, n_bs=4, n_eve=2))
    n_sensors: int = 40
    n_servers: int = 50
    rb_count: int = 2
    distances_m: Tuple[float, float] = (30.0, 50.0)
    eve_distance_m: Optional[float] = None  # None: same as the sensor distance
    f_range_hz: Tuple[float, float] = (40e9, 80e9)
    d_range: Tuple[float, float] = (610 * KB, 1.8 * MB)  # task size, bits
    gas_range: Tuple[float, float] = (1.5e6, 2e6)
    power_dbm: float = 10.0
    noise_dbm: float = -53.0
    eta: float = 1e-27
    c_per_bit: float = 10.0
    epsilon_dissat: int = 8
    epsilon_outage: float = 0.1
    n_groups: int = 4
    carrier_hz: float = 2.4e9
    gain_draws: int = 400   # samples backing the measured mean main capacity
    runs: int = 10_000
    master_seed: int = 20240001

    def __post_init__(self):
        if self.n_sensors < 1 or self.n_servers < self.n_sensors:
            raise ValueError("need n_servers >= n_sensors >= 1")
        if self.rb_count < 1:
            raise ValueError("rb_count must be >= 1")
        for name in ("distances_m", "f_range_hz", "d_range", "gas_range"):
            lo, hi = getattr(self, name)
            if not (0 < lo <= hi):
                raise ValueError(f"{name} must be a nonempty positive range")
        if not 0 <= self.epsilon_dissat <= self.n_sensors - 1:
            raise ValueError("epsilon_dissat must lie in [0, n_sensors-1]")
        if not 0.0 < self.epsilon_outage < 1.0:
            raise ValueError("epsilon_outage must lie in (0,1)")
        if self.runs < 1 or self.gain_draws < 1:
            raise ValueError("runs and gain_draws must be >= 1")
        if not 1 <= self.n_groups <= self.n_sensors:
            raise ValueError("n_groups must lie in [1, n_sensors]")

    @property
    def bandwidth_hz(self) -> float:
        return self.rb_count * RB_BANDWIDTH_HZ

    def with_overrides(self, seed: Optional[int] = None,
                       runs: Optional[int] = None) -> "ExperimentConfig":
        out = self
        if seed is not None:
            out = replace(out, master_seed=int(seed))
        if runs is not None:
            out = replace(out, runs=int(runs))
        return out


def config_from_dict(data: dict) -> ExperimentConfig:
    data = dict(data)
    if "dims" in data:
        data["dims"] = Dimensions(**data["dims"])
    for name in ("distances_m", "f_range_hz", "d_range", "gas_range"):
        if name in data:
            data[name] = tuple(data[name])
    return ExperimentConfig(**data)


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))
