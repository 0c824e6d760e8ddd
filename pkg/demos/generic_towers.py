"""How often a random tower of two quadratics has the largest possible Galois group."""

import numpy as np

from arboreal.generic import exceptional_growth_curve, sample_generic_density
from arboreal.wreath import SphericalIndex

idx = SphericalIndex((2, 2))

# whole boxes, counted exactly
for N in (5, 10, 15, 20, 25):
    rep = sample_generic_density(idx, N, None)
    lvl1, lvl2 = rep.level_fractions
    print(f"N={N:2d}  box {rep.total:>8d}  irreducible f_1 {lvl1:.4f}  D4 tower {lvl2:.4f}")

# sampling a bigger box
rep = sample_generic_density(idx, 200, 5000, np.random.default_rng(7))
print(f"\nN=200 sampled: {rep.fraction:.4f} +- {rep.stderr:.4f}")

# exceptional tuples grow slower than the box
curve = exceptional_growth_curve([5, 10, 15, 20, 25])
print()
print(curve.to_csv())

# indices with no exact classifier fall back to Frobenius statistics
rep = sample_generic_density(SphericalIndex((3,)), 20, 40, np.random.default_rng(3), prime_bound=2000)
print(f"index 3 (heuristic): {rep.fraction:.3f} of sampled cubics look like S3")
