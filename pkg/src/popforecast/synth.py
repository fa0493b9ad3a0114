"""Synthetic center populations: linear trend, Gaussian noise, one-month shocks.

Stand-in for real center data. Each center draws from its own seeded stream so
adding centers never changes the earlier ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from popforecast.errors import DomainError
from popforecast.series import Observation, PopulationSeries


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 7
    centers: int = 16
    periods: int = 63
    level: float = 100.0
    trend: float = 0.5
    noise: float = 3.0
    shocks: int = 0
    shock_size: float = 25.0
    start_year: int = 2005

    def __post_init__(self):
        if self.centers < 1:
            raise DomainError(f"centers must be >= 1, got {self.centers}")
        if self.periods < 1:
            raise DomainError(f"periods must be >= 1, got {self.periods}")
        if self.noise < 0:
            raise DomainError(f"noise must be >= 0, got {self.noise}")
        if not 0 <= self.shocks <= self.periods:
            raise DomainError(f"shocks must lie in 0..periods, got {self.shocks}")


def period_label(t: int, start_year: int = 2005) -> str:
    year, month = divmod(t - 1, 12)
    return f"{start_year + year}-{month + 1:02d}"


def center_name(index: int, total: int) -> str:
    return f"C{index + 1:0{max(2, len(str(total)))}d}"


def generate_center(config: SynthConfig, index: int) -> tuple[PopulationSeries, tuple[int, ...]]:
    """One center's series and the periods that received a shock."""
    rng = np.random.default_rng([config.seed, index])
    t = np.arange(1, config.periods + 1)
    values = config.level + config.trend * t
    if config.noise > 0:
        values = values + rng.normal(0.0, config.noise, config.periods)
    shock_at = ()
    if config.shocks > 0:
        shock_at = tuple(sorted(int(s) for s in rng.choice(t, size=config.shocks, replace=False)))
        signs = rng.choice([-1.0, 1.0], size=config.shocks)
        for s, sign in zip(shock_at, signs):
            values[s - 1] += sign * config.shock_size
    values = np.round(np.maximum(values, 0.0), 2)
    obs = tuple(
        Observation(int(ti), period_label(int(ti), config.start_year), float(v)) for ti, v in zip(t, values)
    )
    return PopulationSeries(center_name(index, config.centers), obs), shock_at


def generate(config: SynthConfig) -> list[tuple[PopulationSeries, tuple[int, ...]]]:
    return [generate_center(config, i) for i in range(config.centers)]
