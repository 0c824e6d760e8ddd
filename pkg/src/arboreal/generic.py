"""Galois groups of quadratics and quartics over Q, and box sampling of sequences.

Box sampling draws the non-leading coefficients of ``f_1, ..., f_n`` uniformly
from ``{-N, ..., N}`` and asks whether ``Gal(f^(i)) = W_i`` for every
``i <= n``.  For the indices ``(2)`` and ``(2, 2)`` (``W_1 = S_2``,
``W_2 = D_4``) this is decided exactly; other indices are scored
heuristically from Frobenius statistics.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .density import exact_type_distribution, frobenius_histogram, surjectivity_score, wreath_type_distribution
from .polyseq import ExplicitList, IntPoly
from .wreath import SphericalIndex, group_order

__all__ = [
    "UnsupportedIndexExactMode",
    "is_square",
    "integer_roots",
    "galois_quadratic",
    "is_irreducible_quartic_Q",
    "resolvent_cubic",
    "galois_quartic",
    "quadratic_tower_maximal",
    "BoxSampleReport",
    "sample_generic_density",
    "GrowthCurve",
    "exceptional_growth_curve",
]

QUARTIC_LABELS = ("S4", "A4", "D4", "C4", "V4", "Reducible")
EXACT_INDICES = ((2,), (2, 2))


class UnsupportedIndexExactMode(ValueError):
    pass


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def _horner(coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def integer_roots(coeffs: Sequence[int]) -> list[int]:
    """Distinct integer roots of a monic integer polynomial (constant term first).

    Candidates come from floating-point root approximations, refined by
    integer Newton steps and then verified exactly, so a returned value is
    always a root.
    """
    coeffs = list(coeffs)
    roots = set()
    if coeffs and coeffs[0] == 0:
        roots.add(0)
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
    if len(coeffs) <= 1:
        return sorted(roots)
    approx = np.roots([float(c) for c in reversed(coeffs)])
    c0 = coeffs[0]
    deriv = [k * c for k, c in enumerate(coeffs)][1:]
    for z in approx:
        base = x = math.floor(z.real)
        # exact integer Newton steps absorb float error in large coefficients
        for _ in range(200):
            fx, dx = _horner(coeffs, x), _horner(deriv, x)
            if fx == 0 or dx == 0:
                break
            step = fx // dx
            if step == 0:
                break
            x -= step
        for k in {*range(base - 1, base + 3), *range(x - 2, x + 3)}:
            if k != 0 and c0 % k == 0 and _horner(coeffs, k) == 0:
                roots.add(k)
    return sorted(roots)


def galois_quadratic(f: IntPoly) -> str:
    """``"S2"`` if the monic quadratic ``f`` is irreducible over Q, else ``"Reducible"``."""
    if f.degree != 2 or not f.is_monic:
        raise ValueError("expected a monic quadratic")
    return "Reducible" if is_square(f.discriminant()) else "S2"


def _quartic_coeffs(f: IntPoly) -> tuple[int, int, int, int]:
    if f.degree != 4 or not f.is_monic:
        raise ValueError("expected a monic quartic")
    d, c, b, a, _ = f.coeffs
    return a, b, c, d


def resolvent_cubic(f: IntPoly) -> IntPoly:
    """Cubic whose roots are ``r1 r2 + r3 r4`` and its conjugates."""
    a, b, c, d = _quartic_coeffs(f)
    return IntPoly((-(a * a * d - 4 * b * d + c * c), a * c - 4 * d, -b, 1))


def _cubic_discriminant(g: IntPoly) -> int:
    s, q, p, _ = g.coeffs
    return p * p * q * q - 4 * q**3 - 4 * p**3 * s - 27 * s * s + 18 * p * q * s


def _quadratic_factor(f: IntPoly, theta_roots: list[int]) -> bool:
    a, b, c, d = _quartic_coeffs(f)
    for theta in theta_roots:
        d1, d2 = theta * theta - 4 * d, a * a - 4 * (b - theta)
        if not (is_square(d1) and is_square(d2)):
            continue
        s1, s2 = math.isqrt(d1), math.isqrt(d2)
        if (theta + s1) % 2 or (a + s2) % 2:
            continue
        v, w = (theta + s1) // 2, (theta - s1) // 2
        u, s = (a + s2) // 2, (a - s2) // 2
        if u * w + v * s == c or u * v + w * s == c:
            return True
    return False


def is_irreducible_quartic_Q(f: IntPoly) -> bool:
    """Exact irreducibility of a monic integer quartic over Q.

    No integer root, and no split into monic integer quadratics.  Any such
    split ``(x^2 + ux + v)(x^2 + sx + w)`` puts ``v + w`` among the integer
    roots of the resolvent cubic, which bounds the search.
    """
    if integer_roots(f.coeffs):
        return False
    return not _quadratic_factor(f, integer_roots(resolvent_cubic(f).coeffs))


def galois_quartic(f: IntPoly) -> str:
    """Galois group of a monic integer quartic: S4, A4, D4, C4, V4 or Reducible.

    Resolvent cubic ``R`` and ``disc f = disc R``: no rational root of ``R``
    gives S4/A4 by squareness of the discriminant, three give V4, and one root
    ``theta`` gives C4 exactly when ``x^2 - theta x + d`` and
    ``x^2 + a x + (b - theta)`` both split over ``Q(sqrt(disc))`` (Kappe-Warren),
    otherwise D4.
    """
    if not is_irreducible_quartic_Q(f):
        return "Reducible"
    a, b, c, d = _quartic_coeffs(f)
    R = resolvent_cubic(f)
    disc = _cubic_discriminant(R)
    roots = integer_roots(R.coeffs)
    if not roots:
        return "A4" if is_square(disc) else "S4"
    if len(roots) == 3:
        return "V4"
    theta = roots[0]

    def splits(q: int) -> bool:
        return is_square(q) or is_square(q * disc)

    if splits(theta * theta - 4 * d) and splits(a * a - 4 * (b - theta)):
        return "C4"
    return "D4"


def _is_square_array(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x)
    if x.dtype == object:
        return np.vectorize(lambda v: is_square(int(v)), otypes=[bool])(x)
    nonneg = x >= 0
    r = np.rint(np.sqrt(np.where(nonneg, x, 0).astype(np.float64))).astype(np.int64)
    ok = np.zeros(x.shape, dtype=bool)
    for k in (-1, 0, 1):
        rk = r + k
        ok |= rk * rk == x
    return nonneg & ok


def quadratic_tower_maximal(c1, b1, c2, b2) -> np.ndarray:
    """Vectorised test of ``Gal(f_1 o f_2) = D_4`` for monic quadratics ``f_i = x^2 + b_i x + c_i``.

    With ``Delta = b_1^2 - 4c_1`` and ``M = 16 f_1(c_2 - b_2^2/4)`` (the norm
    of the discriminant of ``f_2(x) - alpha``), the splitting field has degree
    8 iff none of ``Delta``, ``M``, ``M * Delta`` is a rational square.  This
    also forces ``f_1`` to be irreducible.
    """
    c1, b1, c2, b2 = (np.asarray(v) for v in (c1, b1, c2, b2))
    big = max(int(np.abs(v).max(initial=0)) for v in (c1, b1, c2, b2))
    # |M * delta| must fit in int64
    y_max = 4 * big + big * big
    if (y_max * y_max + 4 * big * y_max + 16 * big) * (big * big + 4 * big) >= 2**62:
        c1, b1, c2, b2 = (v.astype(object) for v in (c1, b1, c2, b2))
    else:
        c1, b1, c2, b2 = (v.astype(np.int64) for v in (c1, b1, c2, b2))
    delta = b1 * b1 - 4 * c1
    y = 4 * c2 - b2 * b2
    M = y * y + 4 * b1 * y + 16 * c1
    return ~_is_square_array(delta) & ~_is_square_array(M) & ~_is_square_array(M * delta)


@dataclass(frozen=True)
class BoxSampleReport:
    index: SphericalIndex
    N: int
    samples: int
    level_successes: tuple[int, ...]
    exhaustive: bool = False
    mode: str = "exact"

    @property
    def fraction(self) -> float:
        return self.level_successes[-1] / self.samples

    @property
    def level_fractions(self) -> list[float]:
        return [s / self.samples for s in self.level_successes]

    @property
    def stderr(self) -> float:
        """Binomial standard error; zero for an exhaustive count."""
        if self.exhaustive:
            return 0.0
        f = self.fraction
        return math.sqrt(f * (1 - f) / self.samples)

    @property
    def total(self) -> int:
        """Box size ``(2N+1)^(D_n)``."""
        return (2 * self.N + 1) ** sum(self.index.degrees)

    def csv_row(self) -> list:
        return [str(self.index), self.N, self.samples, self.mode, f"{self.fraction:.6f}", f"{self.stderr:.6f}"]

    @staticmethod
    def csv_header() -> list[str]:
        return ["index", "N", "samples", "mode", "fraction", "stderr"]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.csv_header())
        w.writerow(self.csv_row())
        return buf.getvalue()


def _exhaustive_grid(N: int, k: int) -> list[np.ndarray]:
    r = np.arange(-N, N + 1, dtype=np.int64)
    return list(np.meshgrid(*([r] * k), indexing="ij", sparse=True))


def _exact_counts(idx: tuple[int, ...], tuples: np.ndarray) -> tuple[int, ...]:
    """Per-level success counts for rows ``(c_1, b_1, c_2, b_2, ...)`` of monic quadratics."""
    lvl1 = sum(galois_quadratic(IntPoly((c, b, 1))) == "S2" for c, b in tuples[:, :2].tolist())
    if idx == (2,):
        return (lvl1,)
    lvl2 = 0
    for c1, b1, c2, b2 in tuples.tolist():
        f1, f2 = IntPoly((c1, b1, 1)), IntPoly((c2, b2, 1))
        if galois_quadratic(f1) == "S2" and galois_quartic(f1.compose(f2)) == "D4":
            lvl2 += 1
    return (lvl1, lvl2)


def _heuristic_success(
    polys: list[IntPoly], refs: list, prime_bound: int, tol: float
) -> list[bool]:
    spec = ExplicitList(tuple(polys))
    out = []
    for i, ref in enumerate(refs, start=1):
        hist = frobenius_histogram(spec, i, prime_bound)
        out.append(surjectivity_score(hist, ref).tv_distance <= tol)
    return out


def sample_generic_density(
    idx: SphericalIndex,
    N: int,
    samples: int | None,
    rng: np.random.Generator | None = None,
    *,
    mode: str = "auto",
    prime_bound: int = 3000,
    tol: float = 0.15,
) -> BoxSampleReport:
    """Fraction of box tuples whose compositions have maximal Galois groups at every level.

    ``samples=None`` runs the whole box (exact mode only).  Heuristic mode
    counts level ``i`` as maximal when the Frobenius type histogram of
    ``f^(i)`` over primes up to ``prime_bound`` is within total-variation
    ``tol`` of the ``W_i`` cycle-type distribution.
    """
    degs = tuple(idx.degrees)
    if mode == "auto":
        mode = "exact" if degs in EXACT_INDICES else "heuristic"
    if mode == "exact" and degs not in EXACT_INDICES:
        raise UnsupportedIndexExactMode(f"exact mode supports indices (2) and (2,2), not ({idx})")
    if mode not in ("exact", "heuristic"):
        raise ValueError(f"unknown mode {mode!r}")

    D = sum(degs)
    if samples is None:
        if mode != "exact":
            raise ValueError("exhaustive runs need exact mode")
        grid = _exhaustive_grid(N, D)
        total = (2 * N + 1) ** D
        if degs == (2,):
            c1, b1 = grid
            ok1 = ~_is_square_array(b1 * b1 - 4 * c1)
            return BoxSampleReport(idx, N, total, (int(np.broadcast_to(ok1, (2 * N + 1,) * 2).sum()),), True, mode)
        c1, b1, c2, b2 = grid
        ok1 = ~_is_square_array(b1 * b1 - 4 * c1)
        lvl1 = int(ok1.sum()) * (2 * N + 1) ** 2
        lvl2 = int(quadratic_tower_maximal(c1, b1, c2, b2).sum())
        return BoxSampleReport(idx, N, total, (lvl1, lvl2), True, mode)

    if samples < 1:
        raise ValueError("samples must be >= 1")
    if rng is None:
        raise ValueError("sampling needs an rng")
    tuples = rng.integers(-N, N + 1, size=(samples, D))
    if mode == "exact":
        return BoxSampleReport(idx, N, samples, _exact_counts(degs, tuples), False, mode)

    refs = []
    for i in range(1, idx.depth + 1):
        sub = idx.truncate(i)
        if group_order(sub) <= 50_000:
            refs.append(exact_type_distribution(sub))
        else:
            refs.append(wreath_type_distribution(sub, 20_000, np.random.default_rng(i)))
    successes = [0] * idx.depth
    for row in tuples.tolist():
        polys, pos = [], 0
        for d in degs:
            polys.append(IntPoly(row[pos : pos + d] + [1]))
            pos += d
        ok = _heuristic_success(polys, refs, prime_bound, tol)
        for i in range(idx.depth):
            if all(ok[: i + 1]):
                successes[i] += 1
    return BoxSampleReport(idx, N, samples, tuple(successes), False, mode)


@dataclass(frozen=True)
class GrowthCurve:
    """Non-maximal counts in nested boxes, against the ``N^(D_n - 1/2) log N`` bound shape."""

    index: SphericalIndex
    N: tuple[int, ...]
    exceptional: tuple[int, ...]
    totals: tuple[int, ...]

    @property
    def fractions(self) -> list[float]:
        return [e / t for e, t in zip(self.exceptional, self.totals)]

    @property
    def bound_exponent(self) -> float:
        return sum(self.index.degrees) - 0.5

    @property
    def slope(self) -> float:
        """Least-squares slope of ``log(exceptional)`` against ``log N``."""
        pts = [(math.log(n), math.log(e)) for n, e in zip(self.N, self.exceptional) if e > 0]
        if len(pts) < 2:
            return float("nan")
        x, y = np.array(pts).T
        return float(np.polyfit(x, y, 1)[0])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "N", "exceptional", "total", "fraction"])
        for n, e, t in zip(self.N, self.exceptional, self.totals):
            w.writerow([str(self.index), n, e, t, f"{e / t:.6f}"])
        w.writerow(["# slope", f"{self.slope:.4f}", "bound_exponent", f"{self.bound_exponent}", ""])
        return buf.getvalue()


def exceptional_growth_curve(
    N_list: Sequence[int], idx: SphericalIndex = SphericalIndex((2, 2))
) -> GrowthCurve:
    """Exhaustively count box tuples without maximal Galois image for each ``N``."""
    reports = [sample_generic_density(idx, N, None, mode="exact") for N in N_list]
    return GrowthCurve(
        idx,
        tuple(N_list),
        tuple(r.samples - r.level_successes[-1] for r in reports),
        tuple(r.samples for r in reports),
    )
