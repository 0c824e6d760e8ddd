"""Dense univariate polynomials over a prime field F_p.

Coefficients are stored constant term first and always reduced into
``range(p)``.  Besides ring arithmetic the module provides Rabin's
irreducibility test and distinct-degree factorisation, which is all that is
needed to read off the decomposition type (the multiset of irreducible-factor
degrees) of a squarefree polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "NotSquarefree",
    "is_prime",
    "PrimeModulus",
    "FpPoly",
    "gcd",
    "frobenius_power",
    "is_irreducible",
    "is_squarefree",
    "ddf",
    "ddf_type",
    "legendre",
]

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class NotSquarefree(ValueError):
    pass


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@dataclass(frozen=True)
class PrimeModulus:
    p: int

    def __post_init__(self):
        if not (2 < self.p < 2**62) or not is_prime(self.p):
            raise ValueError(f"{self.p} is not an odd prime below 2^62")

    def __int__(self) -> int:
        return self.p


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


class FpPoly:
    """Immutable polynomial over F_p."""

    __slots__ = ("p", "coeffs")

    def __init__(self, coeffs: Iterable[int], p: int | PrimeModulus):
        p = int(p)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", tuple(_trim([int(c) % p for c in coeffs])))

    @classmethod
    def _raw(cls, coeffs: list[int], p: int) -> FpPoly:
        # coeffs already reduced and trimmed
        obj = object.__new__(cls)
        object.__setattr__(obj, "p", p)
        object.__setattr__(obj, "coeffs", tuple(coeffs))
        return obj

    @classmethod
    def x(cls, p: int) -> FpPoly:
        return cls((0, 1), p)

    @classmethod
    def const(cls, c: int, p: int) -> FpPoly:
        return cls((c,), p)

    def __setattr__(self, name, value):
        raise AttributeError("FpPoly is immutable")

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __eq__(self, other) -> bool:
        return isinstance(other, FpPoly) and self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    def __repr__(self) -> str:
        return f"FpPoly({list(self.coeffs)}, p={self.p})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms) + f" (mod {self.p})"

    def _coerce(self, other) -> FpPoly:
        if isinstance(other, FpPoly):
            if other.p != self.p:
                raise ValueError(f"modulus mismatch: {self.p} vs {other.p}")
            return other
        if isinstance(other, int):
            return FpPoly((other,), self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, p = self.coeffs, other.coeffs, self.p
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        return FpPoly._raw(_trim(out), p)

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return FpPoly._raw([(-c) % p for c in self.coeffs], p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FpPoly._raw(_mul(self.coeffs, other.coeffs, self.p), self.p)

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q, r = _divmod(list(self.coeffs), other.coeffs, self.p)
        return FpPoly._raw(q, self.p), FpPoly._raw(r, self.p)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        return FpPoly._raw(_rem(list(self.coeffs), other.coeffs, self.p), self.p)

    def monic(self) -> FpPoly:
        if not self.coeffs or self.coeffs[-1] == 1:
            return self
        inv = pow(self.coeffs[-1], -1, self.p)
        return FpPoly._raw([c * inv % self.p for c in self.coeffs], self.p)

    def derivative(self) -> FpPoly:
        p = self.p
        return FpPoly._raw(_trim([k * c % p for k, c in enumerate(self.coeffs)][1:]), p)

    def __call__(self, value: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * value + c) % self.p
        return acc

    def compose(self, inner: FpPoly) -> FpPoly:
        """``self(inner(x))`` by Horner's rule."""
        acc = FpPoly._raw([], self.p)
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def powmod(self, e: int, modulus: FpPoly) -> FpPoly:
        if e < 0:
            raise ValueError("negative exponent")
        m, p = modulus.coeffs, self.p
        result = _rem([1], m, p)
        base = _rem(list(self.coeffs), m, p)
        while e:
            if e & 1:
                result = _rem(_mul(result, base, p), m, p)
            e >>= 1
            if e:
                base = _rem(_mul(base, base, p), m, p)
        return FpPoly._raw(result, p)


def _mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim([c % p for c in out])


def _rem(a: list[int], m: Sequence[int], p: int) -> list[int]:
    dm = len(m) - 1
    if len(a) - 1 < dm:
        return _trim([c % p for c in a])
    inv = pow(m[-1], -1, p)
    a = [c % p for c in a]
    for k in range(len(a) - 1, dm - 1, -1):
        q = a[k] * inv % p
        if q:
            off = k - dm
            for j in range(dm):
                a[off + j] = (a[off + j] - q * m[j]) % p
        a[k] = 0
    return _trim(a[:dm])


def _divmod(a: list[int], m: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    dm = len(m) - 1
    if len(a) - 1 < dm:
        return [], _trim(a)
    inv = pow(m[-1], -1, p)
    quot = [0] * (len(a) - dm)
    for k in range(len(a) - 1, dm - 1, -1):
        q = a[k] * inv % p
        quot[k - dm] = q
        if q:
            off = k - dm
            for j in range(dm):
                a[off + j] = (a[off + j] - q * m[j]) % p
        a[k] = 0
    return _trim(quot), _trim(a[:dm])


def gcd(a: FpPoly, b: FpPoly) -> FpPoly:
    """Monic gcd; ``gcd(0, 0) = 0``."""
    a._coerce(b)
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def _frobenius_matrix(f: FpPoly) -> list[list[int]]:
    """Rows ``x^(p*j) mod f`` for ``j < deg f`` (the Berlekamp matrix)."""
    n, p = f.degree, f.p
    xp = FpPoly.x(p).powmod(p, f).coeffs
    rows = [[1] + [0] * (n - 1)]
    cur = [1]
    for _ in range(1, n):
        cur = _rem(_mul(cur, xp, p), f.coeffs, p)
        rows.append(cur + [0] * (n - len(cur)))
    return rows


def _apply_frobenius(h: Sequence[int], Q: list[list[int]], p: int) -> list[int]:
    # h(x)^p = sum_j h_j x^(p j) since the coefficients lie in F_p
    n = len(Q)
    out = [0] * n
    for j, c in enumerate(h):
        if c:
            row = Q[j]
            for i in range(n):
                out[i] += c * row[i]
    return _trim([c % p for c in out])


class _Frobenius:
    """Iterates ``h -> h^p mod f`` starting from ``x``."""

    def __init__(self, f: FpPoly):
        self.f = f
        if f.degree <= 1:
            self.Q = None
        else:
            self.Q = _frobenius_matrix(f)

    def power(self, k: int) -> list[int]:
        f, p = self.f, self.f.p
        h = _rem([0, 1], f.coeffs, p)
        for _ in range(k):
            if self.Q is None:
                h = FpPoly._raw(h, p).powmod(p, f).coeffs
                h = list(h)
            else:
                h = _apply_frobenius(h, self.Q, p)
        return list(h)


def frobenius_power(f: FpPoly, k: int) -> FpPoly:
    """``x^(p^k) mod f``."""
    if f.degree < 1:
        raise ValueError("need deg f >= 1")
    return FpPoly._raw(_Frobenius(f).power(k), f.p)


def _prime_factors(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: FpPoly) -> bool:
    """Rabin's test: ``x^(p^n) = x mod f`` and ``gcd(x^(p^(n/q)) - x, f) = 1``
    for every prime ``q | n``."""
    n = f.degree
    if n < 1:
        raise ValueError("need deg f >= 1")
    if n == 1:
        return True
    f = f.monic()
    p = f.p
    fr = _Frobenius(f)
    x = FpPoly.x(p)
    cuts = sorted(n // q for q in _prime_factors(n))
    h, done = _rem([0, 1], f.coeffs, p), 0
    for k in cuts:
        for _ in range(k - done):
            h = _apply_frobenius(h, fr.Q, p)
        done = k
        if gcd(FpPoly._raw(h, p) - x, f).degree > 0:
            return False
    for _ in range(n - done):
        h = _apply_frobenius(h, fr.Q, p)
    return FpPoly._raw(h, p) == x % f


def is_squarefree(f: FpPoly) -> bool:
    if f.degree < 1:
        raise ValueError("need deg f >= 1")
    return gcd(f, f.derivative()).degree == 0


def ddf(f: FpPoly) -> list[tuple[FpPoly, int]]:
    """Distinct-degree factorisation of a squarefree ``f``.

    Returns ``(g_i, i)`` pairs where ``g_i`` is the product of all monic
    irreducible factors of degree ``i``.
    """
    if not is_squarefree(f):
        raise NotSquarefree(str(f))
    f = f.monic()
    p = f.p
    x = FpPoly.x(p)
    out = []
    h, i = x % f, 0
    while 2 * (i + 1) <= f.degree:
        i += 1
        h = h.powmod(p, f)
        g = gcd(h - x, f)
        if g.degree > 0:
            out.append((g, i))
            f = f // g
            h = h % f
    if f.degree > 0:
        out.append((f, f.degree))
    return out


def ddf_type(f: FpPoly) -> tuple[int, ...]:
    """Decomposition type of a squarefree ``f``: factor degrees, ascending."""
    parts = []
    for g, i in ddf(f):
        parts.extend([i] * (g.degree // i))
    return tuple(sorted(parts))

