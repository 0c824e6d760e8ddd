import math
import random

import pytest

from arboreal.ffpoly import FpPoly
from arboreal.polyseq import (
    CompositionCache,
    Constant,
    DegreeLimitExceeded,
    ExplicitList,
    FMFamily,
    IntPoly,
    RandomBox,
    compose_prefix_exact,
    compose_prefix_mod_p,
    nth_poly,
    parse_poly,
    parse_spec,
)
from arboreal.wreath import SphericalIndex

X2M2 = Constant(IntPoly((-2, 0, 1)))


@pytest.mark.parametrize(
    "text, coeffs",
    [
        ("x^2-2", (-2, 0, 1)),
        ("x^2 - 54*x + 732", (732, -54, 1)),
        ("-2,0,1", (-2, 0, 1)),
        ("x^4+x+1", (1, 1, 0, 0, 1)),
        ("3x^3-x", (0, -1, 0, 3)),
        ("[5, 0, 1]", (5, 0, 1)),
    ],
)
def test_parse_poly(text, coeffs):
    assert parse_poly(text).coeffs == coeffs


@pytest.mark.parametrize("bad", ["", "x^", "2x3", "x^2x", "a+b"])
def test_parse_poly_rejects(bad):
    with pytest.raises(ValueError):
        parse_poly(bad)


def test_nth_poly():
    assert nth_poly(X2M2, 7) == IntPoly((-2, 0, 1))
    assert nth_poly(FMFamily(3), 1).coeffs == (732, -54, 1)
    # (x - 3^5)^2 + 3^3
    assert nth_poly(FMFamily(3), 2).coeffs == (243**2 + 27, -486, 1)
    with pytest.raises(ValueError):
        nth_poly(X2M2, 0)


def test_random_box_deterministic():
    spec = RandomBox(SphericalIndex((2, 3)), 10, 99)
    assert nth_poly(spec, 2) == nth_poly(RandomBox(SphericalIndex((2, 3)), 10, 99), 2)
    f2 = nth_poly(spec, 2)
    assert f2.degree == 3 and f2.is_monic
    assert all(abs(c) <= 10 for c in f2.coeffs[:-1])
    with pytest.raises(IndexError):
        nth_poly(spec, 3)


def test_members_must_be_monic():
    with pytest.raises(ValueError):
        Constant(IntPoly((1, 2)) * 2)
    with pytest.raises(ValueError):
        ExplicitList((IntPoly((1,)),))


def test_compose_exact():
    assert compose_prefix_exact(X2M2, 2).coeffs == (2, 0, -4, 0, 1)
    assert compose_prefix_exact(X2M2, 0) == IntPoly.x()
    assert compose_prefix_exact(X2M2, 1) == IntPoly((-2, 0, 1))
    with pytest.raises(DegreeLimitExceeded):
        compose_prefix_exact(X2M2, 5, degree_limit=16)


def test_compose_mod_p():
    assert compose_prefix_mod_p(X2M2, 2, 3) == FpPoly((2, 0, 2, 0, 1), 3)
    assert compose_prefix_mod_p(FMFamily(3), 1, 7) == nth_poly(FMFamily(3), 1).mod(7)
    assert compose_prefix_mod_p(X2M2, 0, 5) == FpPoly.x(5)


def _random_spec(rng):
    degs = [rng.choice([1, 2, 2, 3]) for _ in range(rng.randint(1, 4))]
    polys = [IntPoly([rng.randint(-9, 9) for _ in range(d)] + [1]) for d in degs]
    return ExplicitList(tuple(polys))


def test_mod_p_composition_equals_exact_then_reduce():
    rng = random.Random(3)
    done = 0
    while done < 100:
        spec = _random_spec(rng)
        if math.prod(f.degree for f in spec.polys) > 64:
            continue
        for n in range(1, len(spec.polys) + 1):
            exact = compose_prefix_exact(spec, n, degree_limit=64)
            for p in (3, 5, 101, 7919):
                red = compose_prefix_mod_p(spec, n, p)
                assert red == exact.mod(p)
                assert red.degree == exact.degree
        done += 1


def test_exact_composition_evaluates_pointwise():
    spec = ExplicitList((IntPoly((1, 2, 1)), IntPoly((-3, 0, 0, 1))))
    h = compose_prefix_exact(spec, 2)
    for x in range(-5, 6):
        assert h(x) == spec.polys[0](spec.polys[1](x))


def test_parse_spec_round_trip(tmp_path):
    path = tmp_path / "seq.txt"
    spec = ExplicitList((IntPoly((-2, 0, 1)), IntPoly((1, 1, 0, 1))))
    path.write_text("# comment line\n" + spec.to_text())
    assert parse_spec(f"file:{path}") == spec
    assert parse_spec("const:x^2-2") == X2M2
    assert parse_spec("fmf:3") == FMFamily(3)
    assert parse_spec("random:2,2:25:7") == RandomBox(SphericalIndex((2, 2)), 25, 7)
    assert parse_spec(str(RandomBox(SphericalIndex((2, 2)), 25, 7))) == RandomBox(SphericalIndex((2, 2)), 25, 7)
    with pytest.raises(ValueError):
        parse_spec("bogus:1")


def test_cache_matches_recompute():
    cache = CompositionCache()
    for p in (3, 5, 7):
        for n in (1, 2, 3):
            assert cache.get(FMFamily(3), n, p) == compose_prefix_mod_p(FMFamily(3), n, p)
    assert len(cache) == 9
    assert cache.get(FMFamily(3), 2, 5) is cache.get(FMFamily(3), 2, 5)
