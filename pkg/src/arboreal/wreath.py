"""Iterated wreath products of symmetric groups acting on a rooted tree.

``W_n = S_{d_1} wr S_{d_2} wr ... wr S_{d_n}`` is the automorphism group of
the spherically homogeneous rooted tree truncated at level ``n``.  An element
is stored recursively as ``(upper, labels)``: ``upper`` acts on the first
``n - 1`` levels and ``labels[r]`` is the permutation of the children of the
level-``(n-1)`` vertex with address index ``r``.  Labels are indexed by the
*image* address, so

    a . (t_1, ..., t_n) = (t'_1, ..., t'_{n-1}, labels[r'](t_n))

where ``(t'_1, ..., t'_{n-1}) = upper . (t_1, ..., t_{n-1})`` and ``r'`` is
its index.

All coordinates are 0-based: a leaf address is a tuple ``(t_1, ..., t_n)``
with ``0 <= t_i < d_i``, and the address index is the mixed-radix integer
with ``t_1`` most significant.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "OrderExceedsLimit",
    "SphericalIndex",
    "Permutation",
    "WreathElement",
    "identity",
    "act",
    "compose",
    "inverse",
    "leaf_cycle_type",
    "is_full_cycle_orbit",
    "is_full_cycle_recursive",
    "group_order",
    "full_cycle_count",
    "enumerate_group",
    "sample_uniform",
    "sample_leaf_permutations",
    "full_cycle_mask",
    "cycle_types_of",
    "estimate_full_cycle_ratio",
    "element_to_json",
    "element_from_json",
]


class OrderExceedsLimit(ValueError):
    """Raised when an enumeration would exceed the caller's size limit."""


@dataclass(frozen=True)
class SphericalIndex:
    """Degree sequence ``(d_1, ..., d_n)`` of a truncated tree."""

    degrees: tuple[int, ...]

    def __init__(self, degrees: Sequence[int]):
        degs = tuple(int(d) for d in degrees)
        for d in degs:
            if d < 1:
                raise ValueError(f"degrees must be >= 1, got {degs}")
        object.__setattr__(self, "degrees", degs)

    @classmethod
    def parse(cls, text: str) -> SphericalIndex:
        """Parse ``"2,3,2"``."""
        try:
            degs = [int(tok) for tok in text.replace(" ", "").split(",") if tok]
        except ValueError as exc:
            raise ValueError(f"invalid spherical index {text!r}") from exc
        if not degs:
            raise ValueError("spherical index must have at least one level")
        return cls(degs)

    @property
    def depth(self) -> int:
        return len(self.degrees)

    def __len__(self) -> int:
        return len(self.degrees)

    def __getitem__(self, i):
        return self.degrees[i]

    def __str__(self) -> str:
        return ",".join(map(str, self.degrees))

    @cached_property
    def partial_products(self) -> tuple[int, ...]:
        """``(d^(0), d^(1), ..., d^(n))`` with ``d^(0) = 1``."""
        out = [1]
        for d in self.degrees:
            out.append(out[-1] * d)
        return tuple(out)

    @property
    def leaves(self) -> int:
        return self.partial_products[-1]

    def truncate(self, n: int) -> SphericalIndex:
        return SphericalIndex(self.degrees[:n])

    def addresses(self) -> Iterator[tuple[int, ...]]:
        """All leaf addresses in index order."""
        return itertools.product(*(range(d) for d in self.degrees))

    def address_index(self, address: Sequence[int]) -> int:
        if len(address) != self.depth:
            raise ValueError(f"address {tuple(address)} has wrong length for index {self}")
        r = 0
        for t, d in zip(address, self.degrees):
            if not 0 <= t < d:
                raise ValueError(f"address {tuple(address)} out of range for index {self}")
            r = r * d + t
        return r

    def address_of(self, r: int) -> tuple[int, ...]:
        out = []
        for d in reversed(self.degrees):
            r, t = divmod(r, d)
            out.append(t)
        return tuple(reversed(out))


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{0, ..., d-1}``; ``images[i]`` is the image of ``i``."""

    images: tuple[int, ...]

    def __init__(self, images: Sequence[int]):
        imgs = tuple(int(i) for i in images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"{imgs} is not a permutation")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, d: int) -> Permutation:
        return cls(range(d))

    @classmethod
    def from_cycles(cls, d: int, *cycles: Sequence[int]) -> Permutation:
        imgs = list(range(d))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + type(cyc)(cyc[:1])):
                imgs[a] = b
        return cls(imgs)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: Permutation) -> Permutation:
        # (self * other)(i) = self(other(i))
        return Permutation(tuple(self.images[j] for j in other.images))

    def inverse(self) -> Permutation:
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def cycle_type(self) -> tuple[int, ...]:
        return _cycle_type(self.images)

    def is_full_cycle(self) -> bool:
        return _orbit_length(self.images, 0) == len(self.images)


def _orbit_length(images: Sequence[int], start: int) -> int:
    n, i = 1, images[start]
    while i != start:
        i = images[i]
        n += 1
    return n


def _cycle_type(images: Sequence[int]) -> tuple[int, ...]:
    seen = [False] * len(images)
    parts = []
    for s in range(len(images)):
        if seen[s]:
            continue
        n, i = 0, s
        while not seen[i]:
            seen[i] = True
            i = images[i]
            n += 1
        parts.append(n)
    return tuple(sorted(parts))


@dataclass(frozen=True, eq=False)
class WreathElement:
    """An automorphism of the truncated tree with spherical index ``index``.

    ``upper`` is ``None`` exactly when ``index`` has depth 0 (the trivial group
    on the single root vertex).
    """

    index: SphericalIndex
    upper: WreathElement | None
    labels: tuple[Permutation, ...] = field(default=())

    def __post_init__(self):
        n = self.index.depth
        if n == 0:
            if self.upper is not None or self.labels:
                raise ValueError("depth-0 element carries no data")
            return
        if self.upper is None or self.upper.index != self.index.truncate(n - 1):
            raise ValueError("upper element has the wrong spherical index")
        if len(self.labels) != self.index.partial_products[n - 1]:
            raise ValueError(
                f"expected {self.index.partial_products[n - 1]} labels, got {len(self.labels)}"
            )
        d = self.index.degrees[-1]
        for h in self.labels:
            if h.degree != d:
                raise ValueError(f"label {h.images} is not in S_{d}")

    @cached_property
    def _key(self) -> tuple:
        return (self.index.degrees, tuple(self.levels()))

    def __eq__(self, other) -> bool:
        return isinstance(other, WreathElement) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"WreathElement(index={self.index}, labels={self.levels()})"

    @property
    def depth(self) -> int:
        return self.index.depth

    def levels(self) -> list[tuple[tuple[int, ...], ...]]:
        """Labels of every level, root level first, as nested image tuples."""
        out = []
        a = self
        while a.depth > 0:
            out.append(tuple(h.images for h in a.labels))
            a = a.upper
        return out[::-1]

    @cached_property
    def leaf_permutation(self) -> tuple[int, ...]:
        """Images of all leaves, as address indices."""
        if self.depth == 0:
            return (0,)
        up = self.upper.leaf_permutation
        d = self.index.degrees[-1]
        out = [0] * self.index.leaves
        for r, s in enumerate(up):
            h = self.labels[s].images
            base, img = r * d, s * d
            for t in range(d):
                out[base + t] = img + h[t]
        return tuple(out)

    def __mul__(self, other: WreathElement) -> WreathElement:
        return compose(self, other)

    def __call__(self, address: Sequence[int]) -> tuple[int, ...]:
        return act(self, address)


def _check_same(a: WreathElement, b: WreathElement) -> None:
    if a.index != b.index:
        raise ValueError(f"spherical index mismatch: {a.index} vs {b.index}")


def from_levels(idx: SphericalIndex, levels: Sequence[Sequence[Sequence[int]]]) -> WreathElement:
    """Build an element from per-level label lists (root level first)."""
    if len(levels) != idx.depth:
        raise ValueError(f"expected {idx.depth} levels, got {len(levels)}")
    a = WreathElement(SphericalIndex(()), None)
    for n, labs in enumerate(levels, start=1):
        a = WreathElement(idx.truncate(n), a, tuple(Permutation(h) for h in labs))
    return a


def identity(idx: SphericalIndex) -> WreathElement:
    pp = idx.partial_products
    return from_levels(
        idx, [[range(d)] * pp[i] for i, d in enumerate(idx.degrees)]
    )


def act(a: WreathElement, address: Sequence[int]) -> tuple[int, ...]:
    """Image of a leaf address under ``a``."""
    address = tuple(address)
    r = a.index.address_index(address)
    return a.index.address_of(a.leaf_permutation[r])


def compose(a: WreathElement, b: WreathElement) -> WreathElement:
    """The product ``ab``, acting as ``v -> a . (b . v)``.

    With image-indexed labels the product's label at (image) address ``s`` is
    ``a.labels[s] * b.labels[a.upper^{-1}(s)]``.
    """
    _check_same(a, b)
    if a.depth == 0:
        return a
    upper = compose(a.upper, b.upper)
    ainv = _invert(a.upper.leaf_permutation)
    labels = tuple(a.labels[s] * b.labels[ainv[s]] for s in range(len(a.labels)))
    return WreathElement(a.index, upper, labels)


def _invert(perm: Sequence[int]) -> list[int]:
    inv = [0] * len(perm)
    for i, j in enumerate(perm):
        inv[j] = i
    return inv


def inverse(a: WreathElement) -> WreathElement:
    if a.depth == 0:
        return a
    up = a.upper.leaf_permutation
    # a^{-1} sends (s, u) to (upper^{-1}(s), labels[s]^{-1}(u)); its image address is r with upper(r) = s
    labels = tuple(a.labels[up[r]].inverse() for r in range(len(a.labels)))
    return WreathElement(a.index, inverse(a.upper), labels)


def leaf_cycle_type(a: WreathElement) -> tuple[int, ...]:
    """Orbit sizes of ``a`` on the leaves, ascending."""
    return _cycle_type(a.leaf_permutation)


def is_full_cycle_orbit(a: WreathElement) -> bool:
    return _orbit_length(a.leaf_permutation, 0) == a.index.leaves


def is_full_cycle_recursive(a: WreathElement, *, check_all: bool = False) -> bool:
    """Full-cycle test through the level structure.

    ``a = (g, (h_r))`` is a full cycle iff ``g`` is a full cycle on level
    ``n - 1`` and the product of the labels met while walking once around
    ``g``'s cycle (which is ``a^{d^(n-1)}`` restricted to one fibre) is a
    ``d_n``-cycle.  The products at different base addresses are conjugate,
    so one base suffices; ``check_all`` verifies every base anyway.
    """
    if a.depth == 0:
        return True
    if not is_full_cycle_recursive(a.upper, check_all=check_all):
        return False
    g = a.upper.leaf_permutation
    bases = range(len(g)) if check_all else (0,)
    verdicts = set()
    for r0 in bases:
        prod = tuple(range(a.index.degrees[-1]))
        r = r0
        for _ in range(len(g)):
            r = g[r]
            h = a.labels[r].images
            prod = tuple(h[j] for j in prod)
        verdicts.add(_orbit_length(prod, 0) == len(prod))
    if len(verdicts) > 1:
        raise AssertionError("fibre products at different bases are not conjugate")
    return verdicts.pop()


def group_order(idx: SphericalIndex) -> int:
    """``prod_i (d_i!)^(d^(i-1))``."""
    pp = idx.partial_products
    return math.prod(math.factorial(d) ** pp[i] for i, d in enumerate(idx.degrees))


def full_cycle_count(idx: SphericalIndex) -> int:
    """``prod_i (d_i - 1)! (d_i!)^(d^(i-1) - 1)``."""
    pp = idx.partial_products
    return math.prod(
        math.factorial(d - 1) * math.factorial(d) ** (pp[i] - 1)
        for i, d in enumerate(idx.degrees)
    )


def enumerate_group(idx: SphericalIndex, limit: int = 10**6) -> Iterator[WreathElement]:
    """Yield every element of ``W_n`` once.

    Order is lexicographic over the per-vertex labels, vertices taken level by
    level in address order, each label running over ``itertools.permutations``
    order.
    """
    order = group_order(idx)
    if order > limit:
        raise OrderExceedsLimit(f"|W| = {order} exceeds limit {limit}")
    pp = idx.partial_products
    slots = []
    for i, d in enumerate(idx.degrees):
        slots.extend([list(itertools.permutations(range(d)))] * pp[i])
    for choice in itertools.product(*slots):
        levels, pos = [], 0
        for i in range(idx.depth):
            levels.append(choice[pos : pos + pp[i]])
            pos += pp[i]
        yield from_levels(idx, levels)


def sample_uniform(idx: SphericalIndex, rng: np.random.Generator) -> WreathElement:
    """Uniform random element: every vertex label is an independent uniform permutation."""
    pp = idx.partial_products
    return from_levels(
        idx, [[rng.permutation(d).tolist() for _ in range(pp[i])] for i, d in enumerate(idx.degrees)]
    )


def sample_leaf_permutations(
    idx: SphericalIndex, size: int, rng: np.random.Generator
) -> np.ndarray:
    """Leaf permutations of ``size`` uniform elements, shape ``(size, d^(n))``.

    Vectorised counterpart of :func:`sample_uniform`; row ``k`` is the
    ``leaf_permutation`` of the ``k``-th sample.
    """
    perm = np.zeros((size, 1), dtype=np.int64)
    for i, d in enumerate(idx.degrees):
        nv = idx.partial_products[i]
        labels = rng.permuted(np.broadcast_to(np.arange(d), (size, nv, d)), axis=-1)
        # row s: new[r*d + t] = perm[r]*d + labels[perm[r], t]
        moved = np.take_along_axis(labels, perm[:, :, None], axis=1)
        perm = (perm[:, :, None] * d + moved).reshape(size, nv * d)
    return perm


def full_cycle_mask(perms: np.ndarray) -> np.ndarray:
    """Rows of ``perms`` that are a single cycle."""
    size, m = perms.shape
    rows = np.arange(size)
    cur = perms[:, 0].copy()
    ok = np.ones(size, dtype=bool)
    for _ in range(m - 1):
        ok &= cur != 0
        cur = perms[rows, cur]
    return ok


def cycle_types_of(perms: np.ndarray) -> list[tuple[int, ...]]:
    """Cycle type of every row of ``perms``."""
    size, m = perms.shape
    rows = np.arange(size)[:, None]
    cur = perms.copy()
    length = np.zeros_like(perms)
    start = np.broadcast_to(np.arange(m), perms.shape)
    for k in range(1, m + 1):
        hit = (cur == start) & (length == 0)
        length[hit] = k
        cur = perms[rows, cur]
    # a cycle of length L contributes L points of length L
    counts = np.stack([(length == L).sum(axis=1) // L for L in range(1, m + 1)], axis=1)
    keys, inverse_idx = np.unique(counts, axis=0, return_inverse=True)
    types = [
        tuple(L for L in range(1, m + 1) for _ in range(int(row[L - 1]))) for row in keys
    ]
    return [types[j] for j in np.ravel(inverse_idx)]


def estimate_full_cycle_ratio(
    idx: SphericalIndex, samples: int, rng: np.random.Generator, batch: int = 100_000
) -> tuple[float, float]:
    """Monte Carlo estimate of the full-cycle proportion of ``W_n`` and its standard error."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    hits, left = 0, samples
    while left:
        k = min(batch, left)
        hits += int(full_cycle_mask(sample_leaf_permutations(idx, k, rng)).sum())
        left -= k
    r = hits / samples
    return r, math.sqrt(r * (1 - r) / samples)


def element_to_json(a: WreathElement) -> str:
    return json.dumps({"index": list(a.index.degrees), "labels": [list(map(list, lv)) for lv in a.levels()]})


def element_from_json(text: str) -> WreathElement:
    obj = json.loads(text)
    return from_levels(SphericalIndex(obj["index"]), obj["labels"])
