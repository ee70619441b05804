"""
Choosing cache sizes with a multiple-choice knapsack
====================================================

Each AP offers a menu: cache the top ``j`` files and get sum rate ``nu_j``
while sending ``(1 - hit_j) * nu_j`` over the shared fiber. Picking one
entry per AP under the fiber capacity is a multiple-choice knapsack, which
a dynamic program over integer capacity units solves exactly.
"""
from fiwicache import mckp_exhaustive, mckp_solve
from fiwicache.vabwf import Candidate, opt_out

###############################################################################
# Two APs with hand-made menus (rate, backhaul units). Caching more lowers
# both the rate (power moves to storage) and the backhaul load.

menus = {
    0: [(10.0, 8), (9.5, 5), (9.0, 3)],
    1: [(6.0, 6), (5.8, 4), (5.0, 1)],
}
classes = [[opt_out(n)] + [Candidate(n, j, None, rate, 0.0, w)
                           for j, (rate, w) in enumerate(items)]
           for n, items in menus.items()]

###############################################################################
# Sweep the capacity: with a thin pipe the APs cache more, with a fat one
# they give the power back to the radio.

for cap in (0, 4, 7, 10, 14):
    res = mckp_solve(classes, cap)
    picks = ['off' if c.opt_out else f'j={c.prefix_len}' for c in res.choices]
    check = mckp_exhaustive(classes, cap).value
    print(f"C={cap:2d}  value={res.value:5.1f}  units={res.units:2d}  picks={picks}  "
          f"brute force={check:5.1f}")
