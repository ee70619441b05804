"""Comparison algorithms: full cache, equal power, and random cache.

Baselines that overload the backhaul are reported as infeasible, and
their cache-miss traffic is scaled down by ``C / sum(backhaul)`` so the
reported throughput is what the fiber can actually carry.
"""
from __future__ import annotations

import numpy as np

from .domain import Solution, shannon_rate
from .mckp import solve_scenario
from .popularity import subset_hit_ratio, zipf_pmf
from .vabwf import equal_split_allocate, max_prefix_length, vabwf_allocate

__all__ = ['full_cache', 'equal_power', 'random_cache', 'throttle']


def throttle(hits, rates, capacity):
    """Throughput and backhaul load after proportional miss throttling.

    Returns ``(throughput, backhaul_used, feasible)``.
    """
    hits = np.asarray(hits, dtype=float)
    rates = np.asarray(rates, dtype=float)
    miss_traffic = float(np.sum((1.0 - hits) * rates))
    hit_traffic = float(np.sum(hits * rates))
    if miss_traffic <= capacity:
        return float(np.sum(rates)), miss_traffic, True
    return hit_traffic + capacity, float(capacity), False


def _fixed_cache_solution(scenario, algorithm, cached, allocator, model):
    power, s = scenario.power, scenario.catalog.file_size_bits
    allocs, rates, hits, util, prefix = [], [], [], [], []
    for ap, files in zip(scenario.aps, cached):
        j = len(files)
        alloc = allocator(ap.ue_gains, j, power, s)
        nu = float(np.sum(shannon_rate(np.asarray(ap.ue_gains), alloc.powers,
                                       power.noise_power, power.subchannel_bw)))
        allocs.append(alloc)
        rates.append(nu)
        hits.append(subset_hit_ratio(model, files))
        prefix.append(j)
        util.append(j * s / ap.cache_capacity_bits if ap.cache_capacity_bits > 0 else 0.0)
    throughput, used, feasible = throttle(hits, rates, scenario.backhaul_capacity_bps)
    backhaul = [(1.0 - h) * r for h, r in zip(hits, rates)]
    if not feasible:
        scale = scenario.backhaul_capacity_bps / sum(backhaul)
        backhaul = [b * scale for b in backhaul]
    return Solution(
        algorithm=algorithm,
        prefix_lengths=tuple(prefix),
        allocations=tuple(allocs),
        ap_rates=tuple(rates),
        ap_backhaul=tuple(backhaul),
        hit_ratios=tuple(hits),
        total_throughput=throughput,
        backhaul_used=used,
        cache_utilization=tuple(util),
        feasible=feasible,
        selected_opt_out=(False,) * scenario.num_aps,
        backhaul_units=None,
        cached_files=tuple(tuple(f) for f in cached),
    )


def _fill_count(ap, scenario):
    # the power bound only bites when caching a full cache costs more than P_M
    return max(max_prefix_length(ap, scenario.catalog, scenario.power), 0)


def full_cache(scenario):
    """Every AP caches as many top files as fit, then water-fills the rest."""
    model = zipf_pmf(scenario.catalog.file_count, scenario.catalog.zipf_delta)
    cached = [tuple(range(1, _fill_count(ap, scenario) + 1)) for ap in scenario.aps]
    return _fixed_cache_solution(scenario, 'full_cache', cached, vabwf_allocate, model)


def equal_power(scenario, threads=None):
    """Knapsack-optimized prefix caching with equal per-UE power splits."""
    return solve_scenario(scenario, allocator=equal_split_allocate,
                          algorithm='equal_power', threads=threads)


def random_cache(scenario, seed):
    """Each AP fills its cache with uniformly drawn files; equal power split."""
    model = zipf_pmf(scenario.catalog.file_count, scenario.catalog.zipf_delta)
    rng = np.random.default_rng(seed)
    J = scenario.catalog.file_count
    cached = []
    for ap in scenario.aps:
        count = _fill_count(ap, scenario)
        draw = rng.choice(J, size=count, replace=False) + 1
        cached.append(tuple(sorted(int(f) for f in draw)))
    return _fixed_cache_solution(scenario, 'random', cached, equal_split_allocate, model)
