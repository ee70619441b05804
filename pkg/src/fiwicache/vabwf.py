"""Volume-adjustable backhaul-constrained water-filling.

For one AP and a fixed number ``j`` of cached (most popular) files the
transmit budget is ``T = (P_M - omega*j*s) / rho``. Powers follow the
water-filling form ``P_k = (WL - noise/g_k)^+`` where the water level WL
is fixed by spending the whole budget ``T``. The backhaul constraint is
left to the knapsack layer, so every prefix length yields one candidate
item with sum rate ``nu`` and backhaul occupancy ``(1 - hit) * nu``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .domain import DomainError, PowerAllocation, caching_power, shannon_rate
from .popularity import hit_ratio

__all__ = [
    'NoTransmitBudget',
    'Candidate',
    'opt_out',
    'vabwf_allocate',
    'equal_split_allocate',
    'build_candidate',
    'build_class',
    'build_classes',
    'max_prefix_length',
]


class NoTransmitBudget(DomainError):
    """Caching ``j`` files leaves no power for transmission."""


@dataclass(frozen=True)
class Candidate:
    """One knapsack item: AP ``ap_id`` caching its ``prefix_len`` top files.

    ``opt_out`` marks the synthetic zero-rate, zero-weight item standing for
    "pick nothing from this class".
    """

    ap_id: int
    prefix_len: int
    allocation: Optional[PowerAllocation]
    sum_rate: float
    backhaul_occupancy: float
    backhaul_units: int
    opt_out: bool = False


def opt_out(ap_id):
    return Candidate(ap_id, 0, None, 0.0, 0.0, 0, opt_out=True)


def _budget(j, power, file_size_bits):
    budget = power.transmit_budget(j, file_size_bits)
    if not budget > 0:
        raise NoTransmitBudget(
            f"caching {j} files uses {caching_power(j, file_size_bits, power.caching_coeff):.6g} W "
            f"of a {power.max_power:.6g} W budget")
    return budget


def _floors(gains, noise):
    g = np.asarray(gains, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise DomainError("need a non-empty 1-D sequence of channel gains")
    if np.any(~np.isfinite(g)) or np.any(g <= 0):
        raise DomainError("channel gains must be finite and > 0")
    return noise / g


def waterfill(floors, budget):
    """Water-fill ``budget`` over vessels with bottoms ``floors``.

    Returns ``(powers, water_level)``. Users whose power comes out negative
    are dropped and the level recomputed until every active power is
    non-negative.
    """
    floors = np.asarray(floors, dtype=float)
    active = np.ones(floors.size, dtype=bool)
    while True:
        level = (budget + floors[active].sum()) / active.sum()
        powers = level - floors
        negative = active & (powers < 0)
        if not negative.any():
            break
        active &= ~negative
    powers[~active] = 0.0
    return powers, level


def _waterfill_from_floors(floors, j, power, file_size_bits):
    powers, level = waterfill(floors, _budget(j, power, file_size_bits))
    return PowerAllocation(powers, int(j), float(level))


def _equal_from_floors(floors, j, power, file_size_bits):
    budget = _budget(j, power, file_size_bits)
    powers = np.full(floors.size, budget / floors.size)
    # no common water level; report the mean vessel depth instead
    return PowerAllocation(powers, int(j), float(np.mean(powers + floors)))


def vabwf_allocate(gains, j, power, file_size_bits):
    """Optimal transmit powers of one AP that caches its ``j`` top files.

    Parameters
    ----------
    gains : array-like
        Linear channel gains of the AP's UEs.
    j : int
        Number of cached files.
    power : PowerParams
    file_size_bits : float

    Returns
    -------
    PowerAllocation
        Powers in watts; ``rho * sum(P) + omega * j * s == P_M``.

    Raises
    ------
    NoTransmitBudget
        If caching ``j`` files consumes the whole power budget.
    """
    return _waterfill_from_floors(_floors(gains, power.noise_power), j, power, file_size_bits)


def equal_split_allocate(gains, j, power, file_size_bits):
    """Split the transmit budget equally across UEs (no water-filling)."""
    return _equal_from_floors(_floors(gains, power.noise_power), j, power, file_size_bits)


# allocators that can skip per-call gain validation inside build_class
_FROM_FLOORS = {
    vabwf_allocate: _waterfill_from_floors,
    equal_split_allocate: _equal_from_floors,
}


def max_prefix_length(ap, catalog, power):
    """Largest ``j`` allowed by both cache size and power budget, or -1."""
    s = catalog.file_size_bits
    j = min(ap.max_cached_files(s), catalog.file_count)
    per_file = power.caching_coeff * s
    j_power = math.ceil(power.max_power / per_file) - 1
    j = min(j, j_power)
    # guard the float edge of the power bound
    while j >= 0 and not power.transmit_budget(j, s) > 0:
        j -= 1
    return j


def _candidate(ap, j, floors, alloc, model, power, backhaul_unit):
    # floors = noise / g, so g P / noise = P / floors
    nu = float(np.sum(power.subchannel_bw * np.log2(1.0 + alloc.powers / floors)))
    occupancy = (1.0 - hit_ratio(model, j)) * nu
    units = int(math.ceil(occupancy / backhaul_unit))
    return Candidate(ap.id, int(j), alloc, nu, occupancy, units)


def build_candidate(ap, j, model, power, catalog, backhaul_unit,
                    allocator: Callable = vabwf_allocate):
    """Knapsack item for ``ap`` caching its ``j`` most popular files."""
    s = catalog.file_size_bits
    if j * s > ap.cache_capacity_bits * (1 + 1e-12):
        raise DomainError(f"AP {ap.id}: {j} files exceed cache capacity")
    alloc = allocator(ap.ue_gains, j, power, s)
    rates = shannon_rate(np.asarray(ap.ue_gains), alloc.powers,
                         power.noise_power, power.subchannel_bw)
    nu = float(np.sum(rates))
    occupancy = (1.0 - hit_ratio(model, j)) * nu
    units = int(math.ceil(occupancy / backhaul_unit))
    return Candidate(ap.id, int(j), alloc, nu, occupancy, units)


def build_class(ap, model, power, catalog, backhaul_unit,
                allocator: Callable = vabwf_allocate):
    """All items of the knapsack class of ``ap``: opt-out, then j = 0..j_max."""
    j_max = max_prefix_length(ap, catalog, power)
    items = [opt_out(ap.id)]
    fast = _FROM_FLOORS.get(allocator)
    if fast is None:
        items.extend(build_candidate(ap, j, model, power, catalog, backhaul_unit, allocator)
                     for j in range(j_max + 1))
        return items
    floors = _floors(ap.ue_gains, power.noise_power)
    s = catalog.file_size_bits
    for j in range(j_max + 1):
        alloc = fast(floors, j, power, s)
        items.append(_candidate(ap, j, floors, alloc, model, power, backhaul_unit))
    return items


def build_classes(scenario, model, allocator: Callable = vabwf_allocate, threads=None):
    """Build every AP's class; results are ordered by AP regardless of threads."""
    def one(ap):
        return build_class(ap, model, scenario.power, scenario.catalog,
                           scenario.backhaul_unit_bps, allocator)

    if threads is None or threads <= 1 or scenario.num_aps == 1:
        return [one(ap) for ap in scenario.aps]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, scenario.aps))
