"""Tree automorphism groups: orders, full cycles, and a Monte Carlo check."""

from fractions import Fraction

import numpy as np

from arboreal import wreath
from arboreal.wreath import SphericalIndex

# small trees can be listed outright
for degs in [(2, 2), (3, 2), (2, 3), (2, 2, 2)]:
    idx = SphericalIndex(degs)
    elems = list(wreath.enumerate_group(idx))
    fulls = sum(map(wreath.is_full_cycle_orbit, elems))
    print(f"{str(idx):8s} order {len(elems):4d}  full cycles {fulls:3d}  ratio {Fraction(fulls, len(elems))}")

# one element of W_2 = D4, written level by level (0-based images)
idx = SphericalIndex((2, 2))
a = wreath.from_levels(idx, [[(1, 0)], [(0, 1), (1, 0)]])
print("leaf permutation", a.leaf_permutation, "cycle type", wreath.leaf_cycle_type(a))
print("as JSON", wreath.element_to_json(a))

# orbit walk and recursive test agree
print("full cycle?", wreath.is_full_cycle_orbit(a), wreath.is_full_cycle_recursive(a))

# too big to list; sample instead
rng = np.random.default_rng(1)
for degs in [(3, 3, 2), (2, 2, 2, 2), (5, 4, 3)]:
    idx = SphericalIndex(degs)
    r, se = wreath.estimate_full_cycle_ratio(idx, 200_000, rng)
    print(f"{str(idx):8s} |W| = {wreath.group_order(idx):.3e}  sampled {r:.5f} +- {se:.5f}  exact {1 / idx.leaves:.5f}")
