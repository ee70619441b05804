"""
Water-filling one access point
==============================

An AP shares a fixed power budget among its users. The optimal split
pours power like water over vessels whose bottoms sit at ``noise/gain``:
every served user ends at the same level, and users whose floor is above
that level get nothing. Caching files costs power too, so the more an AP
caches the less water it has to pour.
"""
import numpy as np

from fiwicache import PowerParams, vabwf_allocate, waterfill_bisection
from fiwicache.domain import shannon_rate

###############################################################################
# Five users, one of them in a deep fade.

gains = np.array([2.0, 1.0, 0.5, 0.25, 0.01])
power = PowerParams(max_power=2.4, amplifier_coeff=1.2, caching_coeff=0.1,
                    circuit_power=0.0, noise_power=1.0, subchannel_bw=1.0)

alloc = vabwf_allocate(gains, 0, power, 1.0)
print("floors     ", np.round(power.noise_power / gains, 3))
print("powers     ", np.round(alloc.powers, 4))
print("water level", round(alloc.water_level, 4))
# the faded user's floor (100) is far above the level, so it is switched off

###############################################################################
# The closed-form loop agrees with a plain bisection on the water level.

slow = waterfill_bisection(gains, power.transmit_budget(0, 1.0), power.noise_power)
print("max |diff| vs bisection:", np.max(np.abs(alloc.powers - slow.powers)))

###############################################################################
# Caching j files eats ``omega * j * s`` watts. The budget is always spent
# exactly, but less of it reaches the radio, so the sum rate drops with j.

for j in range(0, 5):
    a = vabwf_allocate(gains, j, power, 1.0)
    rate = shannon_rate(gains, a.powers, power.noise_power, power.subchannel_bw).sum()
    print(f"j={j}  transmit={a.powers.sum():.3f} W  sum rate={rate:.4f} bit/s/Hz  "
          f"residual={a.budget_residual(power, 1.0):+.1e}")
