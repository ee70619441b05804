"""Multiple-choice knapsack over per-AP caching candidates.

Pick at most one item per class maximizing total sum rate subject to the
total backhaul units fitting the capacity. ``R(n, c)`` is the best rate
over the first ``n`` classes with capacity ``c``; it is kept as a single
rolling row while a full traceback table records the chosen item.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import Solution
from .popularity import hit_ratio, zipf_pmf
from .vabwf import build_classes, opt_out, vabwf_allocate

__all__ = ['DpTable', 'MckpResult', 'mckp_solve', 'solve_scenario', 'assemble_solution']

# traceback marker for "keep R(n-1, c)", i.e. the opt-out branch
INCUMBENT = -1


@dataclass(frozen=True, eq=False)
class DpTable:
    """Final value row ``R(N, .)`` plus the ``N x (C+1)`` traceback."""

    values: np.ndarray
    traceback: np.ndarray


@dataclass(frozen=True, eq=False)
class MckpResult:
    choices: list
    value: float
    units: int
    table: DpTable


def _opt_out_item(cls, n):
    for item in cls:
        if item.opt_out:
            return item
    ap_id = cls[0].ap_id if cls else n
    return opt_out(ap_id)


def mckp_solve(classes, capacity_units):
    """Solve the multiple-choice knapsack by dynamic programming.

    Ties go to the incumbent (opt-out) first, then to the earliest item of
    the class; :func:`build_class` orders items by increasing prefix length.

    Parameters
    ----------
    classes : list of list of Candidate
    capacity_units : int

    Returns
    -------
    MckpResult
    """
    cap = int(capacity_units)
    if cap < 0:
        raise ValueError("capacity must be >= 0")
    n_classes = len(classes)
    row = np.zeros(cap + 1)
    trace = np.full((n_classes, cap + 1), INCUMBENT,
                    dtype=np.int32)

    for n, cls in enumerate(classes):
        prev = row
        best = prev.copy()
        choice = trace[n]
        for i, item in enumerate(cls):
            if item.opt_out:
                continue
            w = item.backhaul_units
            if w > cap:
                continue
            cand = prev[:cap + 1 - w] + item.sum_rate
            better = cand > best[w:]
            best[w:][better] = cand[better]
            choice[w:][better] = i
        row = best

    choices = [None] * n_classes
    c = cap
    for n in range(n_classes - 1, -1, -1):
        i = int(trace[n, c])
        if i == INCUMBENT:
            choices[n] = _opt_out_item(classes[n], n)
        else:
            choices[n] = classes[n][i]
            c -= choices[n].backhaul_units
    units = sum(item.backhaul_units for item in choices)
    return MckpResult(choices, float(row[cap]), units, DpTable(row, trace))


def assemble_solution(scenario, choices, model, algorithm, value=None, units=None):
    """Turn one chosen candidate per AP into a :class:`Solution`."""
    s = scenario.catalog.file_size_bits
    prefix, allocs, rates, backhaul, hits, util, skipped = [], [], [], [], [], [], []
    for ap, item in zip(scenario.aps, choices):
        j = 0 if item.opt_out else item.prefix_len
        prefix.append(j)
        allocs.append(item.allocation)
        rates.append(item.sum_rate)
        backhaul.append(item.backhaul_occupancy)
        hits.append(hit_ratio(model, j))
        util.append(j * s / ap.cache_capacity_bits if ap.cache_capacity_bits > 0 else 0.0)
        skipped.append(item.opt_out)
    total = float(value) if value is not None else float(sum(rates))
    used = float(sum(backhaul))
    if units is None:
        units = sum(item.backhaul_units for item in choices)
    feasible = (units <= scenario.capacity_units
                and used <= scenario.backhaul_capacity_bps * (1 + 1e-12))
    return Solution(
        algorithm=algorithm,
        prefix_lengths=tuple(prefix),
        allocations=tuple(allocs),
        ap_rates=tuple(rates),
        ap_backhaul=tuple(backhaul),
        hit_ratios=tuple(hits),
        total_throughput=total,
        backhaul_used=used,
        cache_utilization=tuple(util),
        feasible=bool(feasible),
        selected_opt_out=tuple(skipped),
        backhaul_units=int(units),
    )


def solve_scenario(scenario, allocator=vabwf_allocate, algorithm='proposed', threads=None):
    """Joint caching and power allocation for a whole scenario."""
    model = zipf_pmf(scenario.catalog.file_count, scenario.catalog.zipf_delta)
    classes = build_classes(scenario, model, allocator, threads=threads)
    result = mckp_solve(classes, scenario.capacity_units)
    return assemble_solution(scenario, result.choices, model, algorithm,
                             value=result.value, units=result.units)
