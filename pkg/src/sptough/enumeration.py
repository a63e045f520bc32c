"""Exhaustive generation of canonical alternating SP trees."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional

from .sp_core import LEAF, LabeledGraph, Leaf, Parallel, Series, SpTree, _oriented_codes, realize
from .toughness import CapacityError

MAX_LEAVES = 12


@dataclass(frozen=True)
class EnumerationConfig:
    max_leaves: int
    simple_only: bool = False
    max_vertices: Optional[int] = None

    def __post_init__(self):
        if self.max_leaves < 0:
            raise ValueError("max_leaves must be non-negative")
        if self.max_leaves > MAX_LEAVES:
            raise CapacityError(f"max_leaves {self.max_leaves} exceeds the limit of {MAX_LEAVES}")


def _key(tree: SpTree) -> tuple[str, str]:
    # same parallel-child order as canonicalize
    fwd, bwd = _oriented_codes(tree)
    return min(fwd, bwd), fwd


@lru_cache(maxsize=None)
def _series_trees(n: int, simple: bool) -> tuple:
    """Series-rooted trees with n leaves, one per orientation class of each child."""
    out = []

    def extend(prefix: list, remaining: int):
        if remaining == 0:
            if len(prefix) >= 2:
                out.append(Series(tuple(prefix)))
            return
        for size in range(1, remaining + 1):
            if size == n:
                continue
            for child in _child_options(size, simple, Parallel):
                prefix.append(child)
                extend(prefix, remaining - size)
                prefix.pop()

    extend([], n)
    return tuple(out)


@lru_cache(maxsize=None)
def _parallel_trees(n: int, simple: bool) -> tuple:
    pool = sorted(
        ((_key(c), size, c) for size in range(1, n) for c in _child_options(size, simple, Series)),
        key=lambda item: item[0],
    )
    out = []

    def extend(prefix: list, start: int, remaining: int, leaves: int):
        if remaining == 0:
            if len(prefix) >= 2:
                out.append(Parallel(tuple(prefix)))
            return
        for idx in range(start, len(pool)):
            _, size, child = pool[idx]
            if size > remaining:
                continue
            is_leaf = isinstance(child, Leaf)
            if simple and is_leaf and leaves:
                continue
            prefix.append(child)
            extend(prefix, idx, remaining - size, leaves + is_leaf)
            prefix.pop()

    extend([], 0, n, 0)
    return tuple(out)


def _child_options(size: int, simple: bool, kind) -> tuple:
    if size == 1:
        return (LEAF,)
    return _parallel_trees(size, simple) if kind is Parallel else _series_trees(size, simple)


def trees_with_leaves(n: int, simple_only: bool = False) -> list[SpTree]:
    """Canonical trees with exactly n leaves, one per encode() class, sorted by encode()."""
    if n < 1:
        return []
    if n == 1:
        return [LEAF]
    picked = {}
    for tree in _series_trees(n, simple_only) + _parallel_trees(n, simple_only):
        fwd, bwd = _oriented_codes(tree)
        if fwd <= bwd:
            picked.setdefault(fwd, tree)
    return [picked[code] for code in sorted(picked)]


def enum_trees(config: EnumerationConfig) -> Iterator[SpTree]:
    """Yield canonical trees by leaf count, then encode() text."""
    for n in range(1, config.max_leaves + 1):
        yield from trees_with_leaves(n, config.simple_only)


def realize_stream(
    stream: Iterable[SpTree], max_vertices: Optional[int] = None
) -> Iterator[tuple[SpTree, LabeledGraph]]:
    for tree in stream:
        lg = realize(tree)
        if max_vertices is None or lg.graph.n <= max_vertices:
            yield tree, lg


def enumerate_graphs(config: EnumerationConfig) -> Iterator[tuple[SpTree, LabeledGraph]]:
    return realize_stream(enum_trees(config), config.max_vertices)
