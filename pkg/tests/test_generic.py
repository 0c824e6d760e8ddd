import itertools
import math
import random

import numpy as np
import pytest

from arboreal.ffpoly import ddf_type, is_squarefree
from arboreal.generic import (
    UnsupportedIndexExactMode,
    exceptional_growth_curve,
    galois_quadratic,
    galois_quartic,
    integer_roots,
    is_irreducible_quartic_Q,
    is_square,
    quadratic_tower_maximal,
    resolvent_cubic,
    sample_generic_density,
)
from arboreal.polyseq import IntPoly
from arboreal.wreath import SphericalIndex

from oracles import likeliest_group, reducible_quartic_bruteforce, trial_division_primes

S2 = SphericalIndex((2,))
S22 = SphericalIndex((2, 2))


def quartic(a, b, c, d):
    return IntPoly((d, c, b, a, 1))


def test_is_square():
    assert [n for n in range(-5, 50) if is_square(n)] == [0, 1, 4, 9, 16, 25, 36, 49]
    assert is_square(10**40) and not is_square(10**40 + 1)


def test_integer_roots():
    # (x-3)(x+5)(x-7)
    f = IntPoly((105, -29, -5, 1))
    assert all(f(r) == 0 for r in integer_roots(f.coeffs))
    assert sorted(integer_roots(f.coeffs)) == [-5, 3, 7]
    assert integer_roots((0, 0, 1)) == [0]
    assert integer_roots((2, 0, 1)) == []


def test_integer_roots_large_coefficients():
    rng = random.Random(0)
    for _ in range(2000):
        rs = [rng.randint(-10**12, 10**12) for _ in range(3)]
        if rng.random() < 0.3:
            rs[1] = rs[0]
        f = IntPoly((1,))
        for r in rs:
            f = f * IntPoly((-r, 1))
        assert integer_roots(f.coeffs) == sorted(set(rs))
        g = f * IntPoly((2 * rng.randint(1, 10**6) + 1, 0, 1))
        assert integer_roots(g.coeffs) == sorted(set(rs))


def test_galois_quadratic_against_root_oracle():
    B = 200
    reducible = {(b, -r * r - b * r) for b in range(-B, B + 1) for r in range(-3 * B, 3 * B + 1)}
    for b in range(-B, B + 1, 7):
        for c in range(-B, B + 1):
            expect = "Reducible" if (b, c) in reducible else "S2"
            assert galois_quadratic(IntPoly((c, b, 1))) == expect, (b, c)


def test_resolvent_cubic_discriminant():
    rng = random.Random(1)
    for _ in range(50):
        a, b, c, d = (rng.randint(-9, 9) for _ in range(4))
        f = quartic(a, b, c, d)
        R = resolvent_cubic(f)
        assert R.degree == 3
        # roots of R are the three pair-sums x1x2+x3x4; check numerically
        roots = np.roots([1, a, b, c, d])
        sums = sorted(
            (roots[i] * roots[j] + roots[k] * roots[l]).real
            for i, j, k, l in ((0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2))
        )
        got = sorted(np.roots(R.coeffs[::-1]).real)
        assert np.allclose(sums, got, atol=1e-6 * (1 + max(map(abs, got))))


@pytest.mark.parametrize(
    "coeffs, label",
    [
        ((0, -4, 0, 2), "C4"),
        ((0, 0, 0, -2), "D4"),
        ((0, 0, 1, 1), "S4"),
        ((0, 0, 8, 12), "A4"),
        ((0, 0, 0, 1), "V4"),
        ((0, -10, 0, 1), "V4"),
        ((0, 0, 0, -1), "Reducible"),
        ((0, 2, 0, 1), "Reducible"),
        ((0, -5, 0, 5), "C4"),  # x^4-5x^2+5, the real subfield of Q(zeta_5)'s relative
    ],
)
def test_galois_quartic_examples(coeffs, label):
    assert galois_quartic(quartic(*coeffs)) == label


def test_quartic_irreducibility_against_bruteforce():
    rng = random.Random(4)
    cases = list(itertools.product(range(-2, 3), repeat=4))
    cases += [tuple(rng.randint(-12, 12) for _ in range(4)) for _ in range(1500)]
    for a, b, c, d in cases:
        assert is_irreducible_quartic_Q(quartic(a, b, c, d)) == (not reducible_quartic_bruteforce(a, b, c, d)), (
            a, b, c, d)


def test_tower_criterion_matches_classifier_exhaustively():
    N = 5
    r = range(-N, N + 1)
    rows = np.array(list(itertools.product(r, repeat=4)))
    fast = quadratic_tower_maximal(*rows.T)
    for (c1, b1, c2, b2), ok in zip(rows.tolist(), fast.tolist()):
        f1 = IntPoly((c1, b1, 1))
        slow = galois_quadratic(f1) == "S2" and galois_quartic(f1.compose(IntPoly((c2, b2, 1)))) == "D4"
        assert ok == slow, (c1, b1, c2, b2)


def test_tower_criterion_object_path_agrees():
    rng = np.random.default_rng(0)
    rows = rng.integers(-40, 41, size=(500, 4))
    small = quadratic_tower_maximal(*rows.T)
    big = quadratic_tower_maximal(*(rows.T.astype(object)))
    assert small.tolist() == big.tolist()
    # huge entries force the object path
    h = quadratic_tower_maximal(np.array([10**9]), np.array([1]), np.array([10**9]), np.array([3]))
    f1 = IntPoly((10**9, 1, 1))
    expect = galois_quartic(f1.compose(IntPoly((10**9, 3, 1)))) == "D4"
    assert h.tolist() == [expect]


def _frobenius_types(coeffs, bound):
    f = IntPoly(coeffs)
    counts = {}
    for p in trial_division_primes(bound)[1:]:
        fp = f.mod(p)
        if fp.degree != 4 or not is_squarefree(fp):
            continue
        t = ddf_type(fp)
        counts[t] = counts.get(t, 0) + 1
    return counts


def test_classifier_agrees_with_frobenius_statistics():
    rng = random.Random(12)
    seen = set()
    polys = [(0, -4, 0, 2), (0, 0, 0, -2), (0, 0, 8, 12), (0, -10, 0, 1), (0, 0, 1, 1)]
    while len(polys) < 30:
        q = tuple(rng.randint(-9, 9) for _ in range(4))
        if is_irreducible_quartic_Q(quartic(*q)):
            polys.append(q)
    for q in polys:
        label = galois_quartic(quartic(*q))
        seen.add(label)
        assert likeliest_group(_frobenius_types((q[3], q[2], q[1], q[0], 1), 3000)) == label, q
    assert {"S4", "A4", "D4", "C4", "V4"} <= seen


def test_exact_mode_rejects_other_indices():
    with pytest.raises(UnsupportedIndexExactMode):
        sample_generic_density(SphericalIndex((3,)), 5, 10, np.random.default_rng(0), mode="exact")
    with pytest.raises(ValueError):
        sample_generic_density(SphericalIndex((3,)), 5, None, mode="heuristic")
    with pytest.raises(ValueError):
        sample_generic_density(S2, 5, 10, np.random.default_rng(0), mode="fuzzy")


def _level1_bruteforce(N):
    return sum(not is_square(b * b - 4 * c) for b in range(-N, N + 1) for c in range(-N, N + 1))


def test_exhaustive_quadratic_count_matches_bruteforce():
    for N in (1, 7, 30, 100):
        rep = sample_generic_density(S2, N, None)
        assert rep.exhaustive and rep.stderr == 0
        assert rep.level_successes == (_level1_bruteforce(N),)
        assert rep.samples == rep.total == (2 * N + 1) ** 2
    # the frozen exact value at N = 100
    assert sample_generic_density(S2, 100, None).level_successes[0] == 39228
    assert sample_generic_density(S2, 100, None).fraction == pytest.approx(0.970966, abs=1e-6)


def test_sampled_quadratic_fraction():
    exact = sample_generic_density(S2, 100, None).fraction
    rep = sample_generic_density(S2, 100, 10_000, np.random.default_rng(1))
    assert abs(rep.fraction - exact) < 3 * rep.stderr


def test_sampled_matches_exhaustive_for_22():
    exact = sample_generic_density(S22, 8, None)
    rep = sample_generic_density(S22, 8, 3000, np.random.default_rng(5))
    assert abs(rep.fraction - exact.fraction) < 4 * rep.stderr
    assert exact.level_successes[0] >= exact.level_successes[1]


def test_sampling_is_deterministic():
    a = sample_generic_density(S22, 10, 500, np.random.default_rng(3))
    b = sample_generic_density(S22, 10, 500, np.random.default_rng(3))
    assert a == b and a.to_csv() == b.to_csv()


def test_growth_curve():
    curve = exceptional_growth_curve([2, 4, 6, 8])
    assert curve.totals == tuple((2 * n + 1) ** 4 for n in (2, 4, 6, 8))
    assert list(curve.exceptional) == sorted(curve.exceptional)
    assert curve.bound_exponent == 3.5
    assert 0 < curve.slope < 4
    lines = curve.to_csv().splitlines()
    assert lines[0] == "index,N,exceptional,total,fraction" and len(lines) == 6


def test_heuristic_mode_small():
    idx = SphericalIndex((3,))
    rep = sample_generic_density(idx, 10, 30, np.random.default_rng(2), prime_bound=1500)
    assert rep.mode == "heuristic"
    # most random cubics have group S3
    assert rep.fraction > 0.6
    # x^2 - 2 composed with itself is C4-like, which the heuristic rejects at level 2
    rep = sample_generic_density(S22, 3, 20, np.random.default_rng(0), mode="heuristic", prime_bound=1500)
    exact = sample_generic_density(S22, 3, 20, np.random.default_rng(0), mode="exact")
    assert abs(rep.fraction - exact.fraction) <= 0.25
    assert math.isfinite(rep.stderr)
