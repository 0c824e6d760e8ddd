"""Stable primes of x^2 - 2 and of a family with a different polynomial at every level."""

from arboreal.density import stable_scan
from arboreal.polyseq import Constant, FMFamily, IntPoly, nth_poly

X = 100_000

rep = stable_scan(Constant(IntPoly((-2, 0, 1))), 8, X)
print(rep.to_csv())

# residues mod 8 of the survivors
stable = sorted(rep.stable_primes())
print("first stable primes:", stable[:12])
print("residues mod 8:", sorted({p % 8 for p in stable}))

fam = FMFamily(3)
for k in (1, 2, 3):
    print(f"f_{k} =", nth_poly(fam, k))

rep = stable_scan(fam, 5, X)
# density falls to 1/4 and then stays there
for n, d in enumerate(rep.densities, start=1):
    print(f"n={n}  density {d:.4f}  (1/d^(n) = {1 / 2**n:.4f})")
print("primes where some level is not squarefree:", rep.skipped.tolist())
