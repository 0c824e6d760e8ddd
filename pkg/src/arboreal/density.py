"""Prime scans: stable primes, natural densities and Frobenius statistics.

Densities are natural densities over the odd primes ``p <= X``.  A prime at
which ``f^(n)`` is not squarefree mod ``p`` is left out of both numerator and
denominator of ``density_n`` (there are finitely many such primes).
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import wreath
from .ffpoly import FpPoly, ddf_type, gcd, is_irreducible, is_squarefree, legendre
from .polyseq import SeqSpec, compose_prefix_mod_p, nth_poly
from .wreath import SphericalIndex

__all__ = [
    "PrimeRange",
    "ScanReport",
    "FrobHistogram",
    "SurjectivityScore",
    "sieve_primes",
    "prime_levels",
    "stable_scan",
    "frobenius_histogram",
    "wreath_type_distribution",
    "exact_type_distribution",
    "surjectivity_score",
]


@dataclass(frozen=True)
class PrimeRange:
    bound: int
    primes: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes.tolist())


def sieve_primes(X: int) -> PrimeRange:
    """Odd primes ``<= X`` by the sieve of Eratosthenes."""
    if X < 3:
        raise ValueError("X must be >= 3")
    is_p = np.ones(X + 1, dtype=bool)
    is_p[:2] = False
    for q in range(2, math.isqrt(X) + 1):
        if is_p[q]:
            is_p[q * q :: q] = False
    primes = np.flatnonzero(is_p)
    return PrimeRange(X, primes[primes > 2])


def _eval_in_ring(polys_mod_p: list[FpPoly], start: FpPoly, m: FpPoly) -> FpPoly:
    """``f_1(f_2(...f_k(start)))`` in ``F_p[x]/(m)``; ``polys_mod_p`` is ``[f_1, ..., f_k]``."""
    y = start % m
    for f in reversed(polys_mod_p):
        acc = FpPoly((), m.p)
        for c in reversed(f.coeffs):
            acc = (acc * y + c) % m
        y = acc
    return y


def _eval_at(polys_mod_p: list[FpPoly], value: int) -> int:
    for f in reversed(polys_mod_p):
        value = f(value)
    return value


def prime_levels(spec: SeqSpec, n_max: int, p: int) -> tuple[int, int]:
    """``(max_level, nonsquarefree_level)`` of the sequence at the odd prime ``p``.

    ``max_level`` is the largest ``n <= n_max`` with ``f^(n)`` irreducible mod
    ``p`` (0 if ``f_1`` is reducible).  ``nonsquarefree_level`` is the first
    ``n <= n_max`` at which ``f^(n)`` mod ``p`` has a repeated factor, or 0.

    Squarefreeness is propagated level by level: if ``F = f^(n-1)`` is
    squarefree then ``F(f_n)`` has a repeated root exactly at critical points
    ``c`` of ``f_n`` with ``F(f_n(c)) = 0``, i.e. when
    ``gcd(F(f_n) mod f_n', f_n') != 1``.

    A quadratic level ``f_n = x^2 + bx + c`` over an irreducible ``F`` of
    degree ``D`` stays irreducible iff ``b^2 - 4c + 4*alpha`` is a non-square
    in ``F_p(alpha)`` for a root ``alpha`` of ``F``; its norm to ``F_p`` is
    ``(-4)^D F(c - b^2/4)``, so one Legendre symbol decides.  Other levels fall
    back to Rabin's test on ``f^(n) mod p``.
    """
    polys = [nth_poly(spec, k).mod(p) for k in range(1, n_max + 1)]
    max_level, nonsq = 0, 0
    irreducible = True
    deg_prev = 1
    inv4 = pow(4, -1, p)
    for n in range(1, n_max + 1):
        fn = polys[n - 1]
        lower = polys[: n - 1]
        # squarefree check for f^(n), given f^(n-1) squarefree
        crit_value = None
        dfn = fn.derivative()
        if dfn.is_zero():
            squarefree = False
        elif dfn.degree == 0:
            squarefree = True
        else:
            m = dfn.monic()
            if m.degree == 1 and fn.degree == 2:
                c0, b0 = fn.coeffs[0], fn.coeffs[1] if len(fn.coeffs) > 1 else 0
                crit_value = _eval_at(lower, (c0 - b0 * b0 * inv4) % p)
                squarefree = crit_value != 0
            else:
                e = _eval_in_ring(lower, fn, m)
                squarefree = gcd(e, m).degree == 0
        if not squarefree:
            nonsq = n
            break
        if irreducible:
            if fn.degree == 1:
                pass
            elif fn.degree == 2 and crit_value is not None:
                sign = -1 if deg_prev % 2 else 1
                irreducible = legendre(sign * crit_value, p) == -1
            else:
                irreducible = is_irreducible(compose_prefix_mod_p(spec, n, p))
            if irreducible:
                max_level = n
        deg_prev *= fn.degree
    return max_level, nonsq


def _levels_chunk(args):
    spec, n_max, primes = args
    return [prime_levels(spec, n_max, p) for p in primes]


def _map_chunks(func, spec, param, primes: list[int], workers: int):
    if workers <= 1 or len(primes) < 2 * workers:
        return func((spec, param, primes))
    size = -(-len(primes) // (4 * workers))
    chunks = [primes[i : i + size] for i in range(0, len(primes), size)]
    out = []
    with ProcessPoolExecutor(max_workers=workers) as ex:
        # map preserves chunk order, so merging is deterministic
        for part in ex.map(func, [(spec, param, c) for c in chunks]):
            out.extend(part)
    return out


@dataclass(frozen=True)
class ScanReport:
    """Per-prime irreducibility levels and per-level densities."""

    spec: str
    n_max: int
    bound: int
    degrees: tuple[int, ...]
    primes: np.ndarray
    max_level: np.ndarray
    nonsquarefree_level: np.ndarray

    @property
    def counts(self) -> list[int]:
        """``count_n`` for ``n = 1..n_max``: primes with ``f^(n)`` irreducible."""
        return [int((self.max_level >= n).sum()) for n in range(1, self.n_max + 1)]

    @property
    def denominators(self) -> list[int]:
        """Primes at which ``f^(n)`` is squarefree, per level."""
        nsq = self.nonsquarefree_level
        return [int(((nsq == 0) | (nsq > n)).sum()) for n in range(1, self.n_max + 1)]

    @property
    def densities(self) -> list[float]:
        return [c / d if d else 0.0 for c, d in zip(self.counts, self.denominators)]

    @property
    def predicted(self) -> list[float]:
        """``1/d^(n)``: the full-cycle proportion of the whole wreath product."""
        return [1 / d for d in SphericalIndex(self.degrees).partial_products[1:]]

    @property
    def skipped(self) -> np.ndarray:
        return self.primes[self.nonsquarefree_level > 0]

    @property
    def irreducibility(self) -> list[str]:
        """Per level, ``"verified"`` if ``f^(n)`` is irreducible mod some scanned prime.

        Monic reduction keeps the degree, so one such prime certifies
        irreducibility over Q.  Without one nothing is claimed.
        """
        return ["verified" if c > 0 else "irreducibility unverified" for c in self.counts]

    def stable_primes(self, n: int | None = None) -> set[int]:
        n = self.n_max if n is None else n
        return set(self.primes[self.max_level >= n].tolist())

    def rows(self) -> list[dict]:
        return [
            {
                "X": self.bound,
                "n": n,
                "count": c,
                "primes": d,
                "density": dens,
                "predicted": pred,
                "irreducibility": irr,
            }
            for n, c, d, dens, pred, irr in zip(
                range(1, self.n_max + 1),
                self.counts,
                self.denominators,
                self.densities,
                self.predicted,
                self.irreducibility,
            )
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["X", "n", "count", "primes", "density", "predicted", "irreducibility"])
        for r in self.rows():
            w.writerow(
                [r["X"], r["n"], r["count"], r["primes"], f"{r['density']:.6f}", f"{r['predicted']:.6f}",
                 r["irreducibility"]]
            )
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {
                "spec": self.spec,
                "n_max": self.n_max,
                "X": self.bound,
                "levels": self.rows(),
                "skipped": self.skipped.tolist(),
            },
            indent=2,
        )


def stable_scan(spec: SeqSpec, n_max: int, X: int, workers: int = 1) -> ScanReport:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    primes = sieve_primes(X).primes
    levels = _map_chunks(_levels_chunk, spec, n_max, primes.tolist(), workers)
    arr = np.array(levels, dtype=np.int64).reshape(-1, 2)
    degrees = tuple(nth_poly(spec, k).degree for k in range(1, n_max + 1))
    return ScanReport(str(spec), n_max, X, degrees, primes, arr[:, 0], arr[:, 1])


@dataclass(frozen=True)
class FrobHistogram:
    """Counts of decomposition (or cycle) types of a degree-``degree`` object.

    ``bound`` is the prime bound for Frobenius data and ``None`` for
    distributions drawn from a permutation group.
    """

    level: int
    degree: int
    counts: dict[tuple[int, ...], int]
    skipped: int = 0
    bound: int | None = None
    source: str = ""

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def frequencies(self) -> dict[tuple[int, ...], float]:
        t = self.total
        return {k: v / t for k, v in self.counts.items()} if t else {}

    def frequency(self, cycle_type: tuple[int, ...]) -> float:
        t = self.total
        return self.counts.get(tuple(cycle_type), 0) / t if t else 0.0

    @property
    def full_cycle_frequency(self) -> float:
        return self.frequency((self.degree,))

    def to_json(self) -> str:
        return json.dumps(
            {
                "source": self.source,
                "level": self.level,
                "degree": self.degree,
                "X": self.bound,
                "skipped": self.skipped,
                "counts": [
                    {"type": list(k), "count": v} for k, v in sorted(self.counts.items())
                ],
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> FrobHistogram:
        obj = json.loads(text)
        return cls(
            level=obj["level"],
            degree=obj["degree"],
            counts={tuple(e["type"]): e["count"] for e in obj["counts"]},
            skipped=obj["skipped"],
            bound=obj["X"],
            source=obj.get("source", ""),
        )


def _types_chunk(args):
    spec, n, primes = args
    out = []
    for p in primes:
        f = compose_prefix_mod_p(spec, n, p)
        out.append(ddf_type(f) if is_squarefree(f) else None)
    return out


def frobenius_histogram(spec: SeqSpec, n: int, X: int, workers: int = 1) -> FrobHistogram:
    """Decomposition types of ``f^(n) mod p`` over the odd primes ``p <= X``."""
    primes = sieve_primes(X).primes.tolist()
    types = _map_chunks(_types_chunk, spec, n, primes, workers)
    counts = Counter(t for t in types if t is not None)
    degree = math.prod(nth_poly(spec, k).degree for k in range(1, n + 1))
    return FrobHistogram(
        level=n,
        degree=degree,
        counts=dict(sorted(counts.items())),
        skipped=sum(t is None for t in types),
        bound=X,
        source=str(spec),
    )


def wreath_type_distribution(
    idx: SphericalIndex, samples: int, rng: np.random.Generator, batch: int = 100_000
) -> FrobHistogram:
    """Leaf cycle types of uniform samples from the full wreath product."""
    counts: Counter = Counter()
    left = samples
    while left:
        k = min(batch, left)
        counts.update(wreath.cycle_types_of(wreath.sample_leaf_permutations(idx, k, rng)))
        left -= k
    return FrobHistogram(
        level=idx.depth, degree=idx.leaves, counts=dict(sorted(counts.items())), source=f"W({idx})"
    )


def exact_type_distribution(idx: SphericalIndex, limit: int = 10**6) -> FrobHistogram:
    """Leaf cycle types over every element of the wreath product."""
    counts = Counter(wreath.leaf_cycle_type(a) for a in wreath.enumerate_group(idx, limit))
    return FrobHistogram(
        level=idx.depth, degree=idx.leaves, counts=dict(sorted(counts.items())), source=f"W({idx})"
    )


@dataclass(frozen=True)
class SurjectivityScore:
    tv_distance: float
    full_cycle_frequency: float
    reference_full_cycle_frequency: float
    predicted_full_cycle_frequency: float = field(default=0.0)


def surjectivity_score(hist: FrobHistogram, ref: FrobHistogram) -> SurjectivityScore:
    """Total-variation distance between two type distributions of the same degree.

    Frobenius types of a sequence with ``G_n = W_n`` are asymptotically
    distributed like cycle types of ``W_n``, so a small distance is evidence
    (never proof) of a maximal image.
    """
    if hist.degree != ref.degree:
        raise ValueError(f"degree mismatch: {hist.degree} vs {ref.degree}")
    p, q = hist.frequencies(), ref.frequencies()
    tv = 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in set(p) | set(q))
    return SurjectivityScore(
        tv_distance=min(1.0, tv),
        full_cycle_frequency=hist.full_cycle_frequency,
        reference_full_cycle_frequency=ref.full_cycle_frequency,
        predicted_full_cycle_frequency=1 / hist.degree,
    )
