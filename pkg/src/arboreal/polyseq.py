"""Sequences of monic integer polynomials and their iterated compositions.

A sequence spec produces ``f_1, f_2, ...``; the composition
``f^(n) = f_1 o f_2 o ... o f_n`` has degree ``d^(n) = d_1 ... d_n`` and
``f^(0) = x``.  Exact integer coefficients grow doubly exponentially, so
scans only ever build ``f^(n)`` modulo a prime.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .ffpoly import FpPoly
from .wreath import SphericalIndex

__all__ = [
    "DegreeLimitExceeded",
    "IntPoly",
    "parse_poly",
    "ExplicitList",
    "Constant",
    "FMFamily",
    "RandomBox",
    "parse_spec",
    "nth_poly",
    "spherical_index",
    "compose_prefix_exact",
    "compose_prefix_mod_p",
    "CompositionCache",
]


class DegreeLimitExceeded(ValueError):
    pass


@dataclass(frozen=True)
class IntPoly:
    """Dense integer polynomial, constant term first, no trailing zeros."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        c = [int(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def x(cls) -> IntPoly:
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __add__(self, other: IntPoly | int) -> IntPoly:
        b = other.coeffs if isinstance(other, IntPoly) else (other,)
        a = self.coeffs
        n = max(len(a), len(b))
        return IntPoly(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
        )

    def __mul__(self, other: IntPoly | int) -> IntPoly:
        if isinstance(other, int):
            return IntPoly(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPoly(())
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return IntPoly(out)

    def __call__(self, value: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def compose(self, inner: IntPoly) -> IntPoly:
        acc = IntPoly(())
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def mod(self, p: int) -> FpPoly:
        return FpPoly(self.coeffs, p)

    def discriminant(self) -> int:
        """Discriminant of a monic quadratic; other degrees are not needed here."""
        if self.degree != 2 or not self.is_monic:
            raise ValueError("discriminant is implemented for monic quadratics only")
        c, b, _ = self.coeffs
        return b * b - 4 * c

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        out = ""
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            out += (sign if out or sign == "-" else "") + body
        return out


_TERM = re.compile(r"([+-]?)(\d*)\*?(x(?:\^(\d+))?)?")


def parse_poly(text: str) -> IntPoly:
    """Parse ``"x^2-54*x+732"`` or a coefficient list ``"732,-54,1"`` (constant first)."""
    s = text.replace(" ", "").strip("[]()")
    if not s:
        raise ValueError("empty polynomial")
    if "x" not in s:
        try:
            return IntPoly(int(tok) for tok in s.split(","))
        except ValueError as exc:
            raise ValueError(f"cannot parse polynomial {text!r}") from exc
    coeffs: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos or (not m.group(2) and not m.group(3)):
            raise ValueError(f"cannot parse polynomial {text!r} at {s[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        if pos > 0 and not m.group(1):
            raise ValueError(f"missing operator in {text!r}")
        c = int(m.group(2)) if m.group(2) else 1
        k = 0 if not m.group(3) else (int(m.group(4)) if m.group(4) else 1)
        coeffs[k] = coeffs.get(k, 0) + sign * c
        pos = m.end()
    return IntPoly(coeffs.get(k, 0) for k in range(max(coeffs) + 1))


def _check_member(f: IntPoly) -> IntPoly:
    if not f.is_monic or f.degree < 1:
        raise ValueError(f"sequence members must be monic of degree >= 1, got {f}")
    return f


@dataclass(frozen=True)
class ExplicitList:
    polys: tuple[IntPoly, ...]

    def __post_init__(self):
        if not self.polys:
            raise ValueError("empty polynomial list")
        for f in self.polys:
            _check_member(f)

    @classmethod
    def from_text(cls, text: str) -> ExplicitList:
        """One polynomial per line, comma-separated coefficients, constant term first."""
        lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
        return cls(tuple(parse_poly(ln) for ln in lines if ln))

    @classmethod
    def from_file(cls, path: str | Path) -> ExplicitList:
        return cls.from_text(Path(path).read_text())

    def to_text(self) -> str:
        return "".join(",".join(map(str, f.coeffs)) + "\n" for f in self.polys)

    @property
    def length(self) -> int | None:
        return len(self.polys)

    def nth(self, k: int) -> IntPoly:
        if k > len(self.polys):
            raise IndexError(f"sequence has only {len(self.polys)} members")
        return self.polys[k - 1]

    def __str__(self) -> str:
        return "list:" + ";".join(str(f) for f in self.polys)


@dataclass(frozen=True)
class Constant:
    poly: IntPoly

    def __post_init__(self):
        _check_member(self.poly)

    length = None

    def nth(self, k: int) -> IntPoly:
        return self.poly

    def __str__(self) -> str:
        return f"const:{self.poly}"


@dataclass(frozen=True)
class FMFamily:
    """``f_k = (x - p^(2k+1))^2 + p^(2k-1)``."""

    p: int

    length = None

    def nth(self, k: int) -> IntPoly:
        a, c = self.p ** (2 * k + 1), self.p ** (2 * k - 1)
        return IntPoly((a * a + c, -2 * a, 1))

    def __str__(self) -> str:
        return f"fmf:{self.p}"


@dataclass(frozen=True)
class RandomBox:
    """``f_k`` monic of degree ``d_k`` with lower coefficients uniform in ``[-N, N]``.

    ``f_k`` depends only on ``(seed, k)``, so members can be drawn in any order.
    """

    index: SphericalIndex
    N: int
    seed: int

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("box bound must be >= 0")

    @property
    def length(self) -> int:
        return self.index.depth

    def nth(self, k: int) -> IntPoly:
        if k > self.index.depth:
            raise IndexError(f"random sequence has only {self.index.depth} members")
        d = self.index.degrees[k - 1]
        rng = np.random.default_rng([self.seed, k])
        low = rng.integers(-self.N, self.N + 1, size=d).tolist()
        return IntPoly(low + [1])

    def __str__(self) -> str:
        return f"random:{self.index}:{self.N}:{self.seed}"


SeqSpec = ExplicitList | Constant | FMFamily | RandomBox


def parse_spec(text: str) -> SeqSpec:
    """Parse ``const:<poly>``, ``fmf:<p>``, ``file:<path>`` or ``random:<index>:<N>:<seed>``."""
    kind, _, rest = text.partition(":")
    if kind == "const":
        return Constant(parse_poly(rest))
    if kind == "fmf":
        return FMFamily(int(rest))
    if kind == "file":
        return ExplicitList.from_file(rest)
    if kind == "list":
        return ExplicitList(tuple(parse_poly(t) for t in rest.split(";")))
    if kind == "random":
        parts = rest.split(":")
        if len(parts) != 3:
            raise ValueError("random spec is random:<index>:<N>:<seed>")
        return RandomBox(SphericalIndex.parse(parts[0]), int(parts[1]), int(parts[2]))
    raise ValueError(f"unknown sequence spec {text!r}")


def nth_poly(spec: SeqSpec, k: int) -> IntPoly:
    if k < 1:
        raise ValueError("k must be >= 1")
    return spec.nth(k)


def spherical_index(spec: SeqSpec, n: int) -> SphericalIndex:
    return SphericalIndex([nth_poly(spec, k).degree for k in range(1, n + 1)])


def compose_prefix_exact(spec: SeqSpec, n: int, degree_limit: int = 4096) -> IntPoly:
    """Exact ``f^(n)`` over the integers."""
    if n < 0:
        raise ValueError("n must be >= 0")
    polys = [nth_poly(spec, k) for k in range(1, n + 1)]
    deg = 1
    for f in polys:
        deg *= f.degree
    if deg > degree_limit:
        raise DegreeLimitExceeded(f"d^({n}) = {deg} exceeds {degree_limit}")
    h = IntPoly.x()
    for f in reversed(polys):
        h = f.compose(h)
    return h


def compose_prefix_mod_p(spec: SeqSpec, n: int, p: int) -> FpPoly:
    """``f^(n)`` reduced mod ``p``; built inside out so only degree-``d^(n)`` work is done."""
    h = FpPoly.x(p)
    for k in range(n, 0, -1):
        h = nth_poly(spec, k).mod(p).compose(h)
    return h


class CompositionCache:
    """Memoised ``f^(n) mod p`` keyed by ``(spec, n, p)``."""

    def __init__(self):
        self._store: dict[tuple, FpPoly] = {}
        self._lock = threading.Lock()

    def get(self, spec: SeqSpec, n: int, p: int) -> FpPoly:
        key = (spec, n, p)
        hit = self._store.get(key)
        if hit is None:
            hit = compose_prefix_mod_p(spec, n, p)
            with self._lock:
                self._store.setdefault(key, hit)
        return hit

    def __len__(self) -> int:
        return len(self._store)

