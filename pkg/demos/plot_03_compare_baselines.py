"""
Proposed scheme against the baselines
======================================

A smaller version of the default network (8 APs) compared across the four
algorithms: the joint optimizer, caching as much as fits, the same knapsack
with equal power splits, and random caching.
"""
from fiwicache import GeneratorConfig, generate
from fiwicache.experiments import ALGORITHMS, run_algorithm

###############################################################################
# A high reference SNR makes the backhaul the bottleneck, which is where
# caching pays off.

for snr in (20.0, 30.0):
    config = GeneratorConfig(seed=3, num_aps=8, mean_snr_ref_db=snr,
                             backhaul_capacity_bps=0.25e9)
    sc = generate(config)
    print(f"\nreference SNR {snr:g} dB, backhaul {sc.backhaul_capacity_bps / 1e9:g} Gbps")
    for algo in ALGORITHMS:
        sol = run_algorithm(algo, sc, seed=3)
        print(f"  {algo:<12} {sol.total_throughput / 1e9:7.4f} Gbps  "
              f"cache use {sol.mean_cache_utilization:6.1%}  feasible={sol.feasible}")
