"""Brute-force toughness oracle over all vertex subsets, in exact rationals.

Component counts for every removed set are computed at once with numpy
(label propagation across the ``2**n`` subsets), then reduced with
:class:`fractions.Fraction` arithmetic.  Subset masks use bit ``i`` for the
``i``-th smallest vertex id.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from .sp_core import Multigraph

Rational = Fraction

DEFAULT_CAP = 24
_CHUNK = 1 << 16


class CapacityError(ValueError):
    """The graph has more vertices than the oracle accepts."""


class ToughnessDomainError(ValueError):
    """Raised when an operation needs a finite, nonzero toughness."""


@dataclass(frozen=True, eq=False)
class ToughnessValue:
    """``kind`` is ``"zero"``, ``"finite"`` or ``"infinite"``.

    Values compare by number (zero < finite < infinite) against each other
    and against plain ints and fractions.
    """

    kind: str
    value: Optional[Fraction] = None
    witness: Optional[frozenset] = None

    @classmethod
    def zero(cls) -> "ToughnessValue":
        return cls("zero", None, frozenset())

    @classmethod
    def infinite(cls) -> "ToughnessValue":
        return cls("infinite")

    @classmethod
    def finite(cls, value: Fraction, witness: frozenset) -> "ToughnessValue":
        return cls("finite", Fraction(value), frozenset(witness))

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    @property
    def is_infinite(self) -> bool:
        return self.kind == "infinite"

    def number(self):
        if self.kind == "zero":
            return Fraction(0)
        if self.kind == "infinite":
            return math.inf
        return self.value

    @staticmethod
    def _num(other):
        if isinstance(other, ToughnessValue):
            return other.number()
        return other

    def __eq__(self, other):
        if not isinstance(other, (ToughnessValue, int, float, Fraction)):
            return NotImplemented
        return self.number() == self._num(other)

    def __hash__(self):
        return hash(self.number())

    def __lt__(self, other):
        return self.number() < self._num(other)

    def __le__(self, other):
        return self.number() <= self._num(other)

    def __gt__(self, other):
        return self.number() > self._num(other)

    def __ge__(self, other):
        return self.number() >= self._num(other)

    def __str__(self):
        if self.kind == "infinite":
            return "inf"
        if self.kind == "zero":
            return "0"
        return str(self.value)


@dataclass(frozen=True)
class MinimalityVerdict:
    is_minimal: bool
    tau: ToughnessValue
    counterexample_edge: Optional[int] = None


def mediant(a: Fraction, b: Fraction) -> Fraction:
    """``(p + r) / (q + s)`` for reduced ``a = p/q`` and ``b = r/s``."""
    a, b = Fraction(a), Fraction(b)
    return Fraction(a.numerator + b.numerator, a.denominator + b.denominator)


# --- component counting ------------------------------------------------------


def components(g: Multigraph, removed: Iterable[int] = ()) -> int:
    """Number of components of ``g`` minus ``removed`` (0 if nothing is left)."""
    removed = set(removed)
    unknown = removed - set(g.vertices)
    if unknown:
        raise ValueError(f"unknown vertex id(s): {sorted(unknown)}")
    nbrs = g.neighbors()
    seen = set(removed)
    count = 0
    for v in g.vertices:
        if v in seen:
            continue
        count += 1
        seen.add(v)
        stack = [v]
        while stack:
            for w in nbrs[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return count


def _positions(g: Multigraph):
    order = sorted(g.vertices)
    index = {v: i for i, v in enumerate(order)}
    pairs = sorted({(min(index[a], index[b]), max(index[a], index[b])) for a, b in g.edges if a != b})
    return order, tuple(pairs)


def _count_chunk(n: int, pairs: tuple, lo: int, hi: int) -> np.ndarray:
    masks = np.arange(lo, hi, dtype=np.int64)
    bits = np.arange(n, dtype=np.int64)
    alive = ((masks[:, None] >> bits) & 1) == 0
    labels = np.where(alive, bits.astype(np.int8), np.int8(n))
    if pairs:
        us = np.fromiter((p[0] for p in pairs), dtype=np.int64)
        vs = np.fromiter((p[1] for p in pairs), dtype=np.int64)
        live = alive[:, us] & alive[:, vs]
        while True:
            before = labels.copy()
            for j in range(len(pairs)):
                u, v, ok = us[j], vs[j], live[:, j]
                low = np.minimum(labels[:, u], labels[:, v])
                labels[ok, u] = low[ok]
                labels[ok, v] = low[ok]
            if np.array_equal(before, labels):
                break
    roots = (labels == bits.astype(np.int8)) & alive
    return roots.sum(axis=1).astype(np.int8)


@lru_cache(maxsize=4096)
def _table(n: int, pairs: tuple) -> np.ndarray:
    total = 1 << n
    parts = [_count_chunk(n, pairs, lo, min(total, lo + _CHUNK)) for lo in range(0, total, _CHUNK)]
    table = np.concatenate(parts) if parts else np.zeros(1, dtype=np.int8)
    table.flags.writeable = False
    return table


@lru_cache(maxsize=32)
def _popcounts(n: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.int64)
    pc = np.zeros(1 << n, dtype=np.int8)
    for i in range(n):
        pc += ((masks >> i) & 1).astype(np.int8)
    pc.flags.writeable = False
    return pc


def component_table(g: Multigraph, cap: int = DEFAULT_CAP):
    """``(order, counts)``: ``counts[mask]`` is c(g - set(mask))."""
    if g.n > cap:
        raise CapacityError(f"{g.n} vertices exceeds the oracle cap of {cap}")
    order, pairs = _positions(g)
    return order, _table(g.n, pairs)


def _mask_to_set(order, mask: int) -> frozenset:
    return frozenset(order[i] for i in range(len(order)) if mask >> i & 1)


def _lex_first(masks) -> int:
    """Lexicographically least sorted-vertex tuple among equal-size masks."""
    best = None
    for m in masks:
        m = int(m)
        if best is None:
            best = m
            continue
        diff = best ^ m
        if diff & -diff & m:
            best = m
    return best


def _ratio(order, counts):
    """Minimum |S|/c over cutsets, as (Fraction, size) or None if no cutset."""
    pc = _popcounts(len(order))
    cut = counts >= 2
    if not cut.any():
        return None
    best = None
    for k in range(len(order) + 1):
        sel = cut & (pc == k)
        if not sel.any():
            continue
        r = Fraction(k, int(counts[sel].max()))
        if best is None or r < best:
            best = r
    return best


def toughness(g: Multigraph, cap: int = DEFAULT_CAP) -> ToughnessValue:
    """Exact toughness with the first minimizing cutset as witness.

    Loops and repeated edges do not affect component counts.
    """
    order, counts = component_table(g, cap)
    if g.n >= 2 and counts[0] >= 2:
        return ToughnessValue.zero()
    tau = _ratio(order, counts)
    if tau is None:
        return ToughnessValue.infinite()
    pc = _popcounts(len(order))
    for k in range(len(order) + 1):
        sel = np.nonzero((pc == k) & (counts >= 2) & (counts.astype(np.int64) * tau.numerator == k * tau.denominator))[0]
        if len(sel):
            return ToughnessValue.finite(tau, _mask_to_set(order, _lex_first(sel)))
    raise AssertionError("minimum ratio without a witness")


def tough_sets(g: Multigraph, cap: int = DEFAULT_CAP) -> list[frozenset]:
    """Every cutset attaining the toughness, by size then lexicographically."""
    order, counts = component_table(g, cap)
    tau = toughness(g, cap)
    if not tau.is_finite:
        raise ToughnessDomainError(f"tough sets need a finite nonzero toughness, got {tau}")
    pc = _popcounts(len(order)).astype(np.int64)
    c = counts.astype(np.int64)
    sel = np.nonzero((c >= 2) & (c * tau.value.numerator == pc * tau.value.denominator))[0]
    found = [_mask_to_set(order, int(m)) for m in sel]
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def vertex_connectivity(g: Multigraph, cap: int = DEFAULT_CAP) -> int:
    """Smallest disconnecting vertex set size; ``n - 1`` for complete graphs."""
    order, counts = component_table(g, cap)
    if g.n >= 2 and counts[0] >= 2:
        return 0
    cut = counts >= 2
    if not cut.any():
        return max(g.n - 1, 0)
    return int(_popcounts(len(order))[cut].min())


def is_minimally_tough(g: Multigraph, cap: int = DEFAULT_CAP) -> MinimalityVerdict:
    """Minimal iff every single-edge deletion strictly lowers the toughness."""
    tau = toughness(g, cap)
    if not tau.is_finite:
        return MinimalityVerdict(False, tau)
    for eid in range(g.m):
        if toughness(g.without_edge(eid), cap) >= tau:
            return MinimalityVerdict(False, tau, eid)
    return MinimalityVerdict(True, tau)
