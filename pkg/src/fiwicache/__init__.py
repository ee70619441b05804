"""Joint power allocation and caching for cache-enabled fiber-wireless access networks.

The solver water-fills each AP's transmit budget for every possible number
of cached top files, then picks one option per AP with a multiple-choice
knapsack over the shared fiber backhaul.
"""
from .domain import (AccessPoint, CatalogParams, DomainError, PowerAllocation, PowerParams,
                     Scenario, Solution, caching_power, noise_power_from_density,
                     shannon_rate, sinr)
from .popularity import PopularityModel, hit_ratio, zipf_pmf
from .vabwf import Candidate, NoTransmitBudget, build_candidate, build_class, vabwf_allocate
from .mckp import mckp_solve, solve_scenario
from .baselines import equal_power, full_cache, random_cache
from .oracles import mckp_exhaustive, p1_evaluate, waterfill_bisection
from .scenario import GeneratorConfig, generate, load, save
from .experiments import SweepSpec, run_sweep

__version__ = '0.1.0'
