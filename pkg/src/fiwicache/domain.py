"""Physical model of a cache-enabled fiber-wireless access network.

All quantities are SI: watts, bits, bits/s, Hz. Channel gains are linear
power ratios (dB conversion happens at ingestion only).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

__all__ = [
    'DomainError',
    'CatalogParams',
    'PowerParams',
    'AccessPoint',
    'Scenario',
    'PowerAllocation',
    'Solution',
    'sinr',
    'shannon_rate',
    'noise_power_from_density',
    'caching_power',
]


class DomainError(ValueError):
    """Raised when an input violates the physical model."""


def _finite(name, *values):
    for v in values:
        if not math.isfinite(v):
            raise DomainError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class CatalogParams:
    """File catalog: ``file_count`` equally sized files with Zipf popularity."""

    file_count: int
    file_size_bits: float
    zipf_delta: float

    def __post_init__(self):
        _finite('catalog', self.file_size_bits, self.zipf_delta)
        if self.file_count < 1:
            raise DomainError("file_count must be >= 1")
        if self.file_size_bits <= 0:
            raise DomainError("file_size_bits must be > 0")
        if self.zipf_delta < 0:
            raise DomainError("zipf_delta must be >= 0")


@dataclass(frozen=True)
class PowerParams:
    """Per-AP power budget and radio constants.

    ``circuit_power`` is reported only; it never enters a budget.
    """

    max_power: float
    amplifier_coeff: float
    caching_coeff: float
    circuit_power: float
    noise_power: float
    subchannel_bw: float

    def __post_init__(self):
        _finite('power', self.max_power, self.amplifier_coeff,
                self.caching_coeff, self.circuit_power, self.noise_power,
                self.subchannel_bw)
        for name in ('max_power', 'amplifier_coeff', 'caching_coeff',
                     'noise_power', 'subchannel_bw'):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be > 0")
        if self.circuit_power < 0:
            raise DomainError("circuit_power must be >= 0")

    def transmit_budget(self, j, file_size_bits):
        """Power left for the amplifier input after caching ``j`` files."""
        return (self.max_power
                - caching_power(j, file_size_bits, self.caching_coeff)) / self.amplifier_coeff


@dataclass(frozen=True)
class AccessPoint:
    id: int
    cache_capacity_bits: float
    ue_gains: tuple

    def __post_init__(self):
        gains = tuple(float(g) for g in self.ue_gains)
        object.__setattr__(self, 'ue_gains', gains)
        _finite('access point', self.cache_capacity_bits, *gains)
        if self.cache_capacity_bits < 0:
            raise DomainError(f"AP {self.id}: cache capacity must be >= 0")
        if not gains:
            raise DomainError(f"AP {self.id}: needs at least one UE")
        if any(g <= 0 for g in gains):
            raise DomainError(f"AP {self.id}: channel gains must be > 0")

    @property
    def num_ues(self):
        return len(self.ue_gains)

    def max_cached_files(self, file_size_bits):
        # small tolerance so 30 GB / 100 MB is 300, not 299
        return int(math.floor(self.cache_capacity_bits / file_size_bits + 1e-9))


@dataclass(frozen=True)
class Scenario:
    aps: tuple
    catalog: CatalogParams
    power: PowerParams
    backhaul_capacity_bps: float
    backhaul_unit_bps: float = 1e6

    def __post_init__(self):
        object.__setattr__(self, 'aps', tuple(self.aps))
        _finite('scenario', self.backhaul_capacity_bps, self.backhaul_unit_bps)
        if not self.aps:
            raise DomainError("scenario needs at least one access point")
        if self.backhaul_capacity_bps < 0:
            raise DomainError("backhaul capacity must be >= 0")
        if self.backhaul_unit_bps <= 0:
            raise DomainError("backhaul unit must be > 0")

    @property
    def num_aps(self):
        return len(self.aps)

    @property
    def num_ues(self):
        return sum(ap.num_ues for ap in self.aps)

    @property
    def capacity_units(self):
        """Backhaul capacity in whole DP units, rounded down."""
        return int(math.floor(self.backhaul_capacity_bps / self.backhaul_unit_bps + 1e-9))


@dataclass(frozen=True)
class PowerAllocation:
    """Transmit powers of one AP under a fixed cached prefix length."""

    powers: np.ndarray
    cached_prefix: int
    water_level: float

    def __post_init__(self):
        p = np.asarray(self.powers, dtype=float)
        p.setflags(write=False)
        object.__setattr__(self, 'powers', p)
        if np.any(p < 0):
            raise DomainError("allocated powers must be >= 0")

    def __eq__(self, other):
        if not isinstance(other, PowerAllocation):
            return NotImplemented
        return (self.cached_prefix == other.cached_prefix
                and self.water_level == other.water_level
                and np.array_equal(self.powers, other.powers))

    __hash__ = None

    def budget_residual(self, power, file_size_bits):
        """P_M minus consumed power; zero when the budget is exactly spent."""
        used = (power.amplifier_coeff * float(np.sum(self.powers))
                + caching_power(self.cached_prefix, file_size_bits, power.caching_coeff))
        return power.max_power - used


@dataclass(frozen=True)
class Solution:
    """Joint caching and power decision for every AP of a scenario.

    ``allocations[n]`` is ``None`` when AP ``n`` opted out (transmits
    nothing). ``cached_files[n]`` lists 1-based popularity ranks; for the
    prefix solvers it is simply ``1..prefix_lengths[n]``.
    """

    algorithm: str
    prefix_lengths: tuple
    allocations: tuple
    ap_rates: tuple
    ap_backhaul: tuple
    hit_ratios: tuple
    total_throughput: float
    backhaul_used: float
    cache_utilization: tuple
    feasible: bool
    selected_opt_out: tuple
    backhaul_units: Optional[int] = None
    cached_files: Optional[tuple] = field(default=None, compare=False)

    @property
    def mean_cache_utilization(self):
        return float(np.mean(self.cache_utilization)) if self.cache_utilization else 0.0

    @property
    def wireless_throughput(self):
        """Sum of the per-AP Shannon rates before any backhaul throttling."""
        return float(sum(self.ap_rates))

    def cached_sets(self):
        if self.cached_files is not None:
            return self.cached_files
        return tuple(tuple(range(1, j + 1)) for j in self.prefix_lengths)


def sinr(own_gain, own_power, interference_terms: Sequence = (), noise=1.0):
    """Signal-to-interference-plus-noise ratio at one UE.

    ``interference_terms`` holds ``(gain, power)`` pairs from other APs;
    leave it empty for the interference-free case.
    """
    _finite('sinr', own_gain, own_power, noise)
    interference = 0.0
    for g, p in interference_terms:
        _finite('sinr', g, p)
        if g < 0 or p < 0:
            raise DomainError("interference gains and powers must be >= 0")
        interference += g * p
    if noise <= 0:
        raise DomainError("noise must be > 0")
    if own_gain < 0 or own_power < 0:
        raise DomainError("gain and power must be >= 0")
    return own_gain * own_power / (interference + noise)


def shannon_rate(gain, power, noise, bandwidth):
    """Shannon rate ``B log2(1 + g P / noise)`` in bits/s.

    Vectorizes over array ``gain`` and ``power``.
    """
    if not (bandwidth > 0 and math.isfinite(bandwidth)):
        raise DomainError("bandwidth must be a positive finite number")
    if not (noise > 0 and math.isfinite(noise)):
        raise DomainError("noise must be a positive finite number")
    g = np.asarray(gain, dtype=float)
    p = np.asarray(power, dtype=float)
    if not (np.all(np.isfinite(g)) and np.all(np.isfinite(p))):
        raise DomainError("gain and power must be finite")
    if np.any(g <= 0) or np.any(p < 0):
        raise DomainError("gain must be > 0 and power >= 0")
    rate = bandwidth * np.log2(1.0 + g * p / noise)
    return float(rate) if rate.ndim == 0 else rate


def noise_power_from_density(density_dbm_per_hz, bandwidth):
    """Thermal noise power in watts over ``bandwidth`` Hz."""
    _finite('noise density', density_dbm_per_hz, bandwidth)
    if bandwidth <= 0:
        raise DomainError("bandwidth must be > 0")
    dbm = density_dbm_per_hz + 10.0 * math.log10(bandwidth)
    return 10.0 ** ((dbm - 30.0) / 10.0)


def caching_power(j, file_size_bits, caching_coeff):
    """Energy-proportional caching power of ``j`` cached files."""
    if j < 0:
        raise DomainError("number of cached files must be >= 0")
    return caching_coeff * j * file_size_bits
