"""Slow, independent reference implementations used to check the solvers."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .domain import DomainError, PowerAllocation
from .mckp import DpTable, MckpResult, _opt_out_item
from .popularity import zipf_pmf

__all__ = [
    'InstanceTooLarge',
    'waterfill_bisection',
    'mckp_exhaustive',
    'P1Report',
    'p1_evaluate',
]

MAX_ENUMERATION = 10 ** 7


class InstanceTooLarge(ValueError):
    pass


def waterfill_bisection(gains, budget, noise, max_iter=400):
    """Water-filling by bisection on the level ``L`` solving
    ``sum(max(L - noise/g, 0)) == budget``.
    """
    if not budget > 0:
        raise DomainError("budget must be > 0")
    floors = noise / np.asarray(gains, dtype=float)
    lo = float(floors.min())
    hi = lo + budget
    tol = 1e-12 * budget
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if np.maximum(mid - floors, 0.0).sum() > budget:
            hi = mid
        else:
            lo = mid
        if hi - lo <= tol:
            break
    level = 0.5 * (lo + hi)
    return PowerAllocation(np.maximum(level - floors, 0.0), 0, level)


def mckp_exhaustive(classes, capacity_units):
    """Enumerate every per-class choice and keep the best feasible one.

    Ties follow the DP's rule: compare choices from the last class
    backwards, preferring the opt-out item, then the earliest item.
    """
    sizes = [len(c) for c in classes]
    if math.prod(sizes) > MAX_ENUMERATION:
        raise InstanceTooLarge(f"{math.prod(sizes)} selections exceed {MAX_ENUMERATION}")
    # rank -1 for opt-out so it wins ties
    ranks = [[-1 if item.opt_out else i for i, item in enumerate(c)] for c in classes]
    best_value, best_key, best_pick = -math.inf, None, None
    for pick in itertools.product(*(range(s) for s in sizes)):
        weight = 0
        value = 0.0
        for n, i in enumerate(pick):
            item = classes[n][i]
            weight += item.backhaul_units
            value += item.sum_rate
        if weight > capacity_units:
            continue
        key = tuple(ranks[n][pick[n]] for n in reversed(range(len(pick))))
        if value > best_value or (value == best_value and key < best_key):
            best_value, best_key, best_pick = value, key, pick
    if best_pick is None:
        # only possible when some class lacks an opt-out and nothing fits
        choices = [_opt_out_item(c, n) for n, c in enumerate(classes)]
        best_value = 0.0
    else:
        choices = [classes[n][i] for n, i in enumerate(best_pick)]
    units = sum(item.backhaul_units for item in choices)
    return MckpResult(choices, float(best_value), units, DpTable(np.array([]), np.array([])))


@dataclass(frozen=True)
class P1Report:
    """Objective and constraint slacks of a solution; slack >= 0 is satisfied.

    ``power_slack`` and ``cache_slack`` hold one value per AP,
    ``nonneg_slack`` is the smallest transmit power.
    """

    objective: float
    power_slack: tuple
    backhaul_slack: float
    cache_slack: tuple
    nonneg_slack: float
    binary_ok: bool

    def residuals(self):
        return {
            'power': min(self.power_slack),
            'backhaul': self.backhaul_slack,
            'cache': min(self.cache_slack),
            'nonneg': self.nonneg_slack,
        }

    def min_residual(self):
        return min(self.residuals().values())


def p1_evaluate(scenario, solution):
    """Recompute throughput and every P1 constraint from raw decisions.

    Slacks are relative to their budgets (P_M, C, Q_n) so a single
    tolerance applies to all of them; a zero capacity is treated as scale 1.
    """
    if len(solution.allocations) != scenario.num_aps:
        raise ValueError("solution does not match the scenario's AP count")
    model = zipf_pmf(scenario.catalog.file_count, scenario.catalog.zipf_delta)
    pw, s = scenario.power, scenario.catalog.file_size_bits
    objective = 0.0
    backhaul = 0.0
    power_slack, cache_slack = [], []
    min_power = math.inf
    binary_ok = True
    for ap, alloc, files in zip(scenario.aps, solution.allocations, solution.cached_sets()):
        if alloc is None:
            powers = np.zeros(ap.num_ues)
        else:
            powers = np.asarray(alloc.powers, dtype=float)
        if powers.shape != (ap.num_ues,):
            raise ValueError(f"AP {ap.id}: power vector has wrong length")
        x = np.zeros(scenario.catalog.file_count)
        idx = np.asarray(files, dtype=int)
        if idx.size:
            binary_ok &= bool(idx.min() >= 1 and idx.max() <= scenario.catalog.file_count
                              and len(set(idx.tolist())) == idx.size)
            x[idx - 1] = 1.0
        n_cached = float(x.sum())
        g = np.asarray(ap.ue_gains)
        rates = pw.subchannel_bw * np.log2(1.0 + g * powers / pw.noise_power)
        miss = float(np.dot(model.probabilities, 1.0 - x))
        if idx.size == 0:
            miss = 1.0
        objective += float(rates.sum())
        backhaul += miss * float(rates.sum())
        used = pw.amplifier_coeff * float(powers.sum()) + pw.caching_coeff * n_cached * s
        power_slack.append((pw.max_power - used) / pw.max_power)
        cap = ap.cache_capacity_bits
        cache_slack.append((cap - n_cached * s) / (cap if cap > 0 else 1.0))
        min_power = min(min_power, float(powers.min()))
    c = scenario.backhaul_capacity_bps
    backhaul_slack = (c - backhaul) / (c if c > 0 else 1.0)
    return P1Report(objective, tuple(power_slack), backhaul_slack,
                    tuple(cache_slack), min_power / pw.max_power, binary_ok)
