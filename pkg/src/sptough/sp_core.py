"""Multigraphs, series-parallel trees and the conversions between them.

Trees are nested immutable nodes (:class:`Leaf`, :class:`Series`,
:class:`Parallel`).  A node id is the node's position in a preorder walk of
the tree, so ids are stable for structurally equal trees.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional, Union


class StructureError(ValueError):
    """A tree violates the join arity rule or the alternation rule."""


class RecognitionError(ValueError):
    """Recognition was asked for something other than a connected graph."""


@dataclass(frozen=True)
class Multigraph:
    """Undirected multigraph; edge ``i`` is ``edges[i]``.

    Parallel edges and loops are ordinary entries of ``edges``.
    """

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple((int(a), int(b)) for a, b in self.edges))
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex id")
        if any(v < 0 for v in self.vertices):
            raise ValueError("vertex ids must be non-negative")
        known = set(self.vertices)
        for a, b in self.edges:
            if a not in known or b not in known:
                raise ValueError(f"edge ({a}, {b}) uses an unknown vertex")

    @classmethod
    def from_edges(cls, edges, vertices=None) -> "Multigraph":
        edges = [tuple(e) for e in edges]
        if vertices is None:
            vertices = sorted({v for e in edges for v in e})
        return cls(tuple(vertices), tuple(edges))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        # a loop counts twice
        return sum((a == v) + (b == v) for a, b in self.edges)

    def degrees(self) -> dict[int, int]:
        deg = dict.fromkeys(self.vertices, 0)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def neighbors(self) -> dict[int, set[int]]:
        """Adjacency sets, ignoring loops and edge multiplicity."""
        nbrs: dict[int, set[int]] = {v: set() for v in self.vertices}
        for a, b in self.edges:
            if a != b:
                nbrs[a].add(b)
                nbrs[b].add(a)
        return nbrs

    def has_loops(self) -> bool:
        return any(a == b for a, b in self.edges)

    def has_parallel_edges(self) -> bool:
        seen = set()
        for a, b in self.edges:
            key = (min(a, b), max(a, b))
            if key in seen:
                return True
            seen.add(key)
        return False

    def is_simple(self) -> bool:
        return not self.has_loops() and not self.has_parallel_edges()

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        nbrs = self.neighbors()
        start = self.vertices[0]
        seen = {start}
        stack = [start]
        while stack:
            for w in nbrs[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def is_complete(self) -> bool:
        """Underlying simple graph is complete (K_0 and K_1 included)."""
        nbrs = self.neighbors()
        return all(len(nbrs[v]) == self.n - 1 for v in self.vertices)

    def edge_key(self, eid: int) -> tuple[int, int]:
        a, b = self.edges[eid]
        return (a, b) if a <= b else (b, a)

    def adjacent(self, u: int, v: int) -> bool:
        return any({a, b} == {u, v} for a, b in self.edges)

    def without_edge(self, eid: int) -> "Multigraph":
        return Multigraph(self.vertices, self.edges[:eid] + self.edges[eid + 1:])

    def with_edge(self, u: int, v: int) -> "Multigraph":
        return Multigraph(self.vertices, self.edges + ((u, v),))

    def relabeled(self) -> "Multigraph":
        """Copy with vertices renamed to 0..n-1 in ascending order."""
        index = {v: i for i, v in enumerate(sorted(self.vertices))}
        return Multigraph(tuple(range(self.n)), tuple((index[a], index[b]) for a, b in self.edges))


# --- trees -----------------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    """A single edge.  ``edge`` optionally names the host-graph edge id."""

    edge: Optional[int] = field(default=None, compare=False)


@dataclass(frozen=True)
class Series:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class Parallel:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


SpTree = Union[Leaf, Series, Parallel]


def series(*children: SpTree) -> Series:
    return Series(children)


def parallel(*children: SpTree) -> Parallel:
    return Parallel(children)


LEAF = Leaf()


@dataclass(frozen=True)
class NodeInfo:
    id: int
    node: SpTree
    parent: Optional[int]
    index: int  # position among the parent's children
    depth: int


def walk(tree: SpTree) -> list[NodeInfo]:
    """Preorder listing of the tree; ``result[i].id == i``."""
    out: list[NodeInfo] = []
    stack = [(tree, None, 0, 0)]
    while stack:
        node, parent, index, depth = stack.pop()
        out.append(NodeInfo(len(out), node, parent, index, depth))
        if not isinstance(node, Leaf):
            me = len(out) - 1
            for i in range(len(node.children) - 1, -1, -1):
                stack.append((node.children[i], me, i, depth + 1))
    return out


def children_ids(info: list[NodeInfo]) -> dict[int, list[int]]:
    kids: dict[int, list[int]] = defaultdict(list)
    for rec in info:
        if rec.parent is not None:
            kids[rec.parent].append(rec.id)
    return kids


def leaves(tree: SpTree) -> list[int]:
    return [rec.id for rec in walk(tree) if isinstance(rec.node, Leaf)]


def leaf_count(tree: SpTree) -> int:
    if isinstance(tree, Leaf):
        return 1
    return sum(leaf_count(c) for c in tree.children)


def height(tree: SpTree) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + max(height(c) for c in tree.children)


def check_tree(tree: SpTree) -> None:
    """Raise :class:`StructureError` unless every join has two or more children."""
    for rec in walk(tree):
        node = rec.node
        if isinstance(node, Leaf):
            continue
        if not isinstance(node, (Series, Parallel)):
            raise StructureError(f"not a tree node: {node!r}")
        if len(node.children) < 2:
            raise StructureError(f"node {rec.id} has {len(node.children)} child(ren); joins need at least 2")


def is_canonical(tree: SpTree) -> bool:
    """Alternation holds and parallel children are in canonical order."""
    try:
        check_tree(tree)
    except StructureError:
        return False
    return _canon(tree) == tree


def is_alternating(tree: SpTree) -> bool:
    info = walk(tree)
    for rec in info:
        if rec.parent is not None and not isinstance(rec.node, Leaf):
            if type(rec.node) is type(info[rec.parent].node):
                return False
    return True


def reverse(tree: SpTree) -> SpTree:
    """Swap the terminals: every series node has its children reversed."""
    if isinstance(tree, Leaf):
        return tree
    if isinstance(tree, Series):
        return Series(tuple(reverse(c) for c in reversed(tree.children)))
    return Parallel(tuple(reverse(c) for c in tree.children))


def _oriented_codes(tree: SpTree) -> tuple[str, str]:
    """Encodings of the tree read s->t and t->s, parallel children sorted."""
    if isinstance(tree, Leaf):
        return "e", "e"
    codes = [_oriented_codes(c) for c in tree.children]
    if isinstance(tree, Series):
        fwd = "S(" + ",".join(f for f, _ in codes) + ")"
        bwd = "S(" + ",".join(b for _, b in reversed(codes)) + ")"
    else:
        fwd = "P(" + ",".join(sorted(f for f, _ in codes)) + ")"
        bwd = "P(" + ",".join(sorted(b for _, b in codes)) + ")"
    return fwd, bwd


def oriented_code(tree: SpTree) -> str:
    return _oriented_codes(tree)[0]


def encode(tree: SpTree) -> str:
    """Fingerprint that ignores parallel order and which terminal is s."""
    fwd, bwd = _oriented_codes(tree)
    return min(fwd, bwd)


def canonicalize(tree: SpTree) -> SpTree:
    """Flatten same-type nesting and sort parallel children.

    Series children keep their order; leaves are reused so edge labels survive.
    """
    check_tree(tree)
    return _canon(tree)


def _canon(tree: SpTree) -> SpTree:
    if isinstance(tree, Leaf):
        return tree
    kind = type(tree)
    flat: list[SpTree] = []
    for child in tree.children:
        c = _canon(child)
        if type(c) is kind:
            flat.extend(c.children)
        else:
            flat.append(c)
    if kind is Parallel:
        flat.sort(key=lambda c: (encode(c), oriented_code(c)))
    return kind(tuple(flat))


# --- realization -------------------------------------------------------------


@dataclass(frozen=True)
class LabeledGraph:
    """A graph with terminals and the leaf -> edge correspondence of its tree."""

    graph: Multigraph
    s: int
    t: int
    leaf_to_edge: dict = field(default_factory=dict, compare=False)


def realize(tree: SpTree) -> LabeledGraph:
    """Build the graph by series and parallel joins.

    Vertex ids: s = 0, t = 1, then series joining vertices in DFS discovery
    order.  Edge ids follow leaf preorder.
    """
    check_tree(tree)
    edges: list[tuple[int, int]] = []
    leaf_to_edge: dict[int, int] = {}
    counter = [2]
    node_id = [0]

    def build(node: SpTree, s: int, t: int) -> None:
        me = node_id[0]
        node_id[0] += 1
        if isinstance(node, Leaf):
            leaf_to_edge[me] = len(edges)
            edges.append((s, t))
        elif isinstance(node, Parallel):
            for c in node.children:
                build(c, s, t)
        else:
            left = s
            last = len(node.children) - 1
            for i, c in enumerate(node.children):
                if i == last:
                    right = t
                else:
                    right = counter[0]
                    counter[0] += 1
                build(c, left, right)
                left = right

    build(tree, 0, 1)
    graph = Multigraph(tuple(range(counter[0])), tuple(edges))
    return LabeledGraph(graph, 0, 1, leaf_to_edge)


def node_terminals(tree: SpTree, lg: LabeledGraph) -> dict[int, tuple[int, int]]:
    """Host-graph terminals (s, t) of every tree node.

    Works for realized graphs and for recognized graphs alike: only the
    ``leaf_to_edge`` map and the root terminals are used.
    """
    info = walk(tree)
    kids = children_ids(info)
    g = lg.graph
    touched: dict[int, frozenset] = {}
    for rec in reversed(info):
        if isinstance(rec.node, Leaf):
            touched[rec.id] = frozenset(g.edges[lg.leaf_to_edge[rec.id]])
        else:
            touched[rec.id] = frozenset().union(*(touched[k] for k in kids[rec.id]))
    terms = {0: (lg.s, lg.t)}
    for rec in info:
        if isinstance(rec.node, Series):
            s, t = terms[rec.id]
            ks = kids[rec.id]
            left = s
            for a, b in zip(ks, ks[1:]):
                common = touched[a] & touched[b]
                (join,) = common
                terms[a] = (left, join)
                left = join
            terms[ks[-1]] = (left, t)
        elif isinstance(rec.node, Parallel):
            for k in kids[rec.id]:
                terms[k] = terms[rec.id]
    return terms


# --- recognition -------------------------------------------------------------


def recognize(graph: Multigraph, s: int, t: int) -> Optional[SpTree]:
    """Series-parallel tree of ``graph`` with terminals ``s`` and ``t``, or None.

    Parallel edges are merged and non-terminal degree-2 vertices contracted
    until a single s-t edge remains.  Leaves carry the input edge ids.
    """
    if s not in graph.vertices or t not in graph.vertices:
        raise RecognitionError("terminals must be vertices of the graph")
    if not graph.is_connected():
        raise RecognitionError("graph is disconnected")
    if s == t or graph.m == 0 or graph.has_loops():
        return None

    # live edges: key -> (a, b, tree) where the tree runs from a to b
    live: dict[int, tuple[int, int, SpTree]] = {
        i: (a, b, Leaf(i)) for i, (a, b) in enumerate(graph.edges)
    }
    incident: dict[int, set[int]] = {v: set() for v in graph.vertices}
    for i, (a, b) in enumerate(graph.edges):
        incident[a].add(i)
        incident[b].add(i)
    next_key = graph.m

    def add(a: int, b: int, tree: SpTree) -> int:
        nonlocal next_key
        key = next_key
        next_key += 1
        live[key] = (a, b, tree)
        incident[a].add(key)
        incident[b].add(key)
        return key

    def drop(key: int) -> tuple[int, int, SpTree]:
        a, b, tree = live.pop(key)
        incident[a].discard(key)
        incident[b].discard(key)
        return a, b, tree

    def oriented(key: int, start: int) -> SpTree:
        a, _, tree = live[key]
        return tree if a == start else reverse(tree)

    changed = True
    while changed:
        changed = False
        groups: dict[tuple[int, int], list[int]] = defaultdict(list)
        for key in sorted(live):
            a, b, _ = live[key]
            groups[(min(a, b), max(a, b))].append(key)
        for (a, b), keys in groups.items():
            if len(keys) > 1:
                kids = [oriented(k, a) for k in keys]
                for k in keys:
                    drop(k)
                add(a, b, Parallel(tuple(kids)))
                changed = True
        for x in sorted(incident):
            if x in (s, t) or len(incident[x]) != 2:
                continue
            k1, k2 = sorted(incident[x])
            a1, b1, _ = live[k1]
            a2, b2, _ = live[k2]
            u = a1 if b1 == x else b1
            v = a2 if b2 == x else b2
            if u == x or v == x or u == v:
                # a loop or a parallel pair; the parallel pass handles the latter
                continue
            left = oriented(k1, u)
            right = oriented(k2, x)
            drop(k1)
            drop(k2)
            add(u, v, Series((left, right)))
            del incident[x]
            changed = True
            break

    if len(live) != 1:
        return None
    (a, b, tree), = live.values()
    if {a, b} != {s, t}:
        return None
    if a != s:
        tree = reverse(tree)
    return canonicalize(tree)


def recognize_any(graph: Multigraph) -> Optional[tuple[SpTree, int, int]]:
    """First terminal pair (lexicographic) for which the graph is series-parallel."""
    vs = sorted(graph.vertices)
    for i, s in enumerate(vs):
        for t in vs[i + 1:]:
            tree = recognize(graph, s, t)
            if tree is not None:
                return tree, s, t
    return None


def labeled(graph: Multigraph, tree: SpTree, s: int, t: int) -> LabeledGraph:
    """Pair a recognized tree (leaves carry edge ids) with its host graph."""
    mapping = {}
    for rec in walk(tree):
        if isinstance(rec.node, Leaf):
            if rec.node.edge is None:
                raise StructureError("leaf without an edge label")
            mapping[rec.id] = rec.node.edge
    return LabeledGraph(graph, s, t, mapping)
