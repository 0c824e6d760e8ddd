"""Factorisation patterns mod p against cycle types in the tree group."""

from arboreal.density import exact_type_distribution, frobenius_histogram, surjectivity_score
from arboreal.polyseq import Constant, IntPoly, RandomBox, compose_prefix_exact
from arboreal.generic import galois_quartic
from arboreal.wreath import SphericalIndex

ref = exact_type_distribution(SphericalIndex((2, 2)))
print("cycle types in W_2:", dict(ref.frequencies()))

# a random tower of two quadratics: large image
spec = RandomBox(SphericalIndex((2, 2)), 25, 0)
f = compose_prefix_exact(spec, 2)
print(f"\n{f}  ->  {galois_quartic(f)}")
for X in (1_000, 10_000, 100_000):
    h = frobenius_histogram(spec, 2, X)
    s = surjectivity_score(h, ref)
    print(f"  X={X:>6}  type (4) {h.frequency((4,)):.4f}  TV to W_2 {s.tv_distance:.4f}")

# x^2-2 iterated: small (cyclic) image, no transposition pattern
spec = Constant(IntPoly((-2, 0, 1)))
f = compose_prefix_exact(spec, 2)
h = frobenius_histogram(spec, 2, 100_000)
print(f"\n{f}  ->  {galois_quartic(f)}")
print("  patterns:", {k: round(v, 4) for k, v in h.frequencies().items()})
print("  TV to W_2:", round(surjectivity_score(h, ref).tv_distance, 4))
