"""Wreath-product cycle combinatorics and Frobenius statistics of iterated polynomial compositions."""

from .wreath import (
    SphericalIndex,
    Permutation,
    WreathElement,
    group_order,
    full_cycle_count,
    enumerate_group,
    sample_uniform,
    estimate_full_cycle_ratio,
)
from .ffpoly import FpPoly, ddf_type, is_irreducible
from .polyseq import IntPoly, Constant, ExplicitList, FMFamily, RandomBox, parse_poly, parse_spec
from .density import stable_scan, frobenius_histogram, sieve_primes, surjectivity_score
from .generic import galois_quadratic, galois_quartic, sample_generic_density, exceptional_growth_curve

__version__ = "0.1.0"
