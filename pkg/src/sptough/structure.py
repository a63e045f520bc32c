"""Structural recognition of minimally tough series-parallel graphs.

Substructures are matched on the alternating tree.  A substructure roots at a
tree node and only that root may carry extra children in the host tree, so
an occurrence is a host node plus the subset (or consecutive window) of its
children that form the pattern.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Optional

from .sp_core import (
    LabeledGraph,
    Leaf,
    Multigraph,
    Parallel,
    Series,
    SpTree,
    StructureError,
    children_ids,
    check_tree,
    is_alternating,
    labeled,
    node_terminals,
    realize,
    recognize,
    recognize_any,
    walk,
)
from .toughness import DEFAULT_CAP, CapacityError, ToughnessValue, is_minimally_tough, toughness

HALF = Fraction(1, 2)


class NotSeriesParallelError(ValueError):
    pass


class NotSimpleError(ValueError):
    pass


# --- reduction ---------------------------------------------------------------


def _reducible_paths(g: Multigraph) -> list[tuple[int, tuple[int, ...], int]]:
    """Every (u, interior, v) with >= 2 degree-2 interior vertices and u, v non-adjacent."""
    nbrs = g.neighbors()
    deg2 = {v for v in g.vertices if len(nbrs[v]) == 2}
    found = []
    seen_runs = set()
    for start in sorted(deg2):
        for first in sorted(nbrs[start]):
            # walk from `start` away from `first`, collecting degree-2 vertices
            run = [start]
            prev, cur = first, start
            while True:
                (nxt,) = nbrs[cur] - {prev}
                if nxt not in deg2 or nxt == start:
                    break
                run.append(nxt)
                prev, cur = cur, nxt
            key = tuple(run)
            if key in seen_runs or tuple(reversed(run)) in seen_runs:
                continue
            seen_runs.add(key)
            u = first
            for k in range(2, len(run) + 1):
                interior = tuple(run[:k])
                (v,) = nbrs[interior[-1]] - {interior[-2]}
                if u in interior or v in interior or u == v or v in nbrs[u]:
                    continue
                found.append((u, interior, v))
    return found


def _contract(g: Multigraph, u: int, interior: tuple[int, ...], v: int) -> Multigraph:
    keep = min(interior)
    gone = set(interior)
    edges = [e for e in g.edges if e[0] not in gone and e[1] not in gone]
    edges += [(u, keep), (keep, v)]
    vertices = tuple(x for x in g.vertices if x not in gone or x == keep)
    return Multigraph(vertices, tuple(edges))


def _reduction_step(g: Multigraph) -> Optional[Multigraph]:
    paths = _reducible_paths(g)
    if not paths:
        return None
    u, interior, v = min(paths, key=lambda p: sorted(p[1]))
    return _contract(g, u, interior, v)


def reduce(g: Multigraph) -> Multigraph:
    """Shorten induced paths of length >= 3 to length 2 until none remain.

    Each step contracts the candidate whose interior vertex set is
    lexicographically least; the survivor keeps the smallest interior id.
    """
    if not g.is_simple():
        raise NotSimpleError("reduction is defined for simple graphs")
    if not g.is_connected():
        raise ValueError("reduction needs a connected graph")
    while True:
        nxt = _reduction_step(g)
        if nxt is None:
            return g
        g = nxt


def reduction_fixpoints(g: Multigraph) -> list[Multigraph]:
    """Results of every maximal reduction order (distinct labelled graphs)."""
    out = {}
    seen = set()
    stack = [g]
    while stack:
        h = stack.pop()
        key = (h.vertices, tuple(sorted(h.edge_key(i) for i in range(h.m))))
        if key in seen:
            continue
        seen.add(key)
        paths = _reducible_paths(h)
        if not paths:
            out[key] = h
        for u, interior, v in paths:
            stack.append(_contract(h, u, interior, v))
    return list(out.values())


# --- leap and jump edges -----------------------------------------------------


def _require_alternating(tree: SpTree) -> None:
    check_tree(tree)
    if not is_alternating(tree):
        raise StructureError("tree is not in alternating (canonical) form")


def _parallel_parent_leaves(tree: SpTree):
    info = walk(tree)
    kids = children_ids(info)
    for rec in info:
        if isinstance(rec.node, Leaf) and rec.parent is not None and isinstance(info[rec.parent].node, Parallel):
            siblings = [k for k in kids[rec.parent] if k != rec.id]
            n_series = sum(isinstance(info[k].node, Series) for k in siblings)
            yield rec, rec.parent == 0, n_series


def jump_edges(tree: SpTree) -> list[int]:
    """Leaves under a parallel node that is not the root, or under the root
    with at least two series siblings."""
    _require_alternating(tree)
    return [rec.id for rec, at_root, n_series in _parallel_parent_leaves(tree) if not at_root or n_series >= 2]


def leap_edges(tree: SpTree) -> list[int]:
    _require_alternating(tree)
    return [rec.id for rec, at_root, n_series in _parallel_parent_leaves(tree) if at_root and n_series < 2]


# --- substructures -----------------------------------------------------------


@dataclass(frozen=True)
class SubstructureKind:
    name: str
    params: tuple = ()

    def __str__(self):
        if self.name == "R":
            return f"R{self.params[0]}"
        if self.name == "RR":
            return "R{},{}".format(*self.params)
        if self.name == "Bracelet":
            return f"B{self.params[0]}"
        return self.name


P2 = SubstructureKind("P2")
Q2 = SubstructureKind("Q2")
PEARL = SubstructureKind("Pearl")
NECKLACE = SubstructureKind("Necklace")


def R(i: int) -> SubstructureKind:
    if i < 2:
        raise ValueError("R_i needs i >= 2; R_1 is just an edge")
    return SubstructureKind("R", (i,))


def RR(i: int, j: int) -> SubstructureKind:
    if i < 1 or j < 1:
        raise ValueError("R_{i,j} needs i, j >= 1")
    if i == j == 1:
        return P2
    return SubstructureKind("RR", (max(i, j), min(i, j)))


def Bracelet(length: int) -> SubstructureKind:
    if length < 1:
        raise ValueError("bracelet length must be >= 1")
    return SubstructureKind("Bracelet", (length,))


@dataclass(frozen=True)
class Occurrence:
    kind: SubstructureKind
    tree_node: int
    children: tuple  # matched child node ids of tree_node
    graph_vertices: tuple  # terminals first, then middle vertices


def _is_p2(node) -> bool:
    return isinstance(node, Series) and len(node.children) == 2 and all(isinstance(c, Leaf) for c in node.children)


def _is_r(node, i: int) -> bool:
    """Exactly R_i (R_1 being a single edge)."""
    if i == 1:
        return isinstance(node, Leaf)
    return isinstance(node, Parallel) and len(node.children) == i and all(_is_p2(c) for c in node.children)


def _is_path(node) -> bool:
    return isinstance(node, Series) and all(isinstance(c, Leaf) for c in node.children)


def match_substructures(tree: SpTree, kind: SubstructureKind, lg: Optional[LabeledGraph] = None) -> list[Occurrence]:
    """All occurrences of ``kind`` in an alternating tree.

    Vertices are reported in ``lg``'s ids (the tree's own realization by default).
    """
    _require_alternating(tree)
    if lg is None:
        lg = realize(tree)
    info = walk(tree)
    kids = children_ids(info)
    terms = node_terminals(tree, lg)

    def middle(pid: int) -> int:
        # the joining vertex of an exact P2 node
        return terms[kids[pid][0]][1]

    def r_vertices(nid: int) -> tuple:
        if isinstance(info[nid].node, Leaf):
            return terms[nid]
        return terms[nid] + tuple(middle(k) for k in kids[nid])

    out: list[Occurrence] = []
    name = kind.name
    if name == "Bracelet" and kind.params[0] == 1:
        return [Occurrence(kind, o.tree_node, o.children, o.graph_vertices) for o in match_substructures(tree, R(2), lg)]

    for rec in info:
        node, nid = rec.node, rec.id
        ks = kids.get(nid, [])
        if isinstance(node, Series):
            if name == "P2":
                for a, b in zip(ks, ks[1:]):
                    if isinstance(info[a].node, Leaf) and isinstance(info[b].node, Leaf):
                        out.append(Occurrence(kind, nid, (a, b), (terms[a][0], terms[b][1], terms[a][1])))
            elif name == "RR":
                i, j = kind.params
                for a, b in zip(ks, ks[1:]):
                    na, nb = info[a].node, info[b].node
                    if (_is_r(na, i) and _is_r(nb, j)) or (_is_r(na, j) and _is_r(nb, i)):
                        verts = (terms[a][0], terms[b][1], terms[a][1])
                        verts += r_vertices(a)[2:] + r_vertices(b)[2:]
                        out.append(Occurrence(kind, nid, (a, b), verts))
            elif name == "Bracelet":
                length = kind.params[0]
                for start in range(len(ks) - length + 1):
                    window = ks[start:start + length]
                    if all(_is_r(info[k].node, 2) for k in window):
                        joins = tuple(terms[k][0] for k in window) + (terms[window[-1]][1],)
                        mids = tuple(x for k in window for x in r_vertices(k)[2:])
                        out.append(Occurrence(kind, nid, tuple(window), (joins[0], joins[-1]) + joins[1:-1] + mids))
            elif name == "Necklace":
                cs = [info[k].node for k in ks]
                if isinstance(cs[0], Leaf) and isinstance(cs[-1], Leaf) and all(
                    isinstance(c, Leaf) or _is_r(c, 2) for c in cs
                ):
                    mids = tuple(x for k in ks for x in r_vertices(k)[2:])
                    inner = tuple(terms[k][0] for k in ks[1:])
                    out.append(Occurrence(kind, nid, tuple(ks), terms[nid] + inner + mids))
        elif isinstance(node, Parallel):
            p2s = [k for k in ks if _is_p2(info[k].node)]
            if name == "Q2":
                for leaf in (k for k in ks if isinstance(info[k].node, Leaf)):
                    for p in p2s:
                        out.append(Occurrence(kind, nid, (leaf, p), terms[nid] + (middle(p),)))
            elif name == "R":
                for combo in combinations(p2s, kind.params[0]):
                    out.append(Occurrence(kind, nid, combo, terms[nid] + tuple(middle(p) for p in combo)))
            elif name == "Pearl":
                arms = [k for k in ks if _is_path(info[k].node)]
                for a, b in combinations(arms, 2):
                    inner = tuple(terms[c][1] for k in (a, b) for c in kids[k][:-1])
                    out.append(Occurrence(kind, nid, (a, b), terms[nid] + inner))
    return out


# --- cycles and pearl chains -------------------------------------------------


def is_cycle(g: Multigraph) -> bool:
    if g.n < 3 or not g.is_simple() or not g.is_connected():
        return False
    return all(d == 2 for d in g.degrees().values())


@dataclass(frozen=True)
class ChainPart:
    """``kind`` is ``"edge"`` or ``"pearl"``; ``ends`` are the attachment vertices."""

    kind: str
    ends: tuple
    arms: tuple = ()  # pearl arm lengths
    vertices: tuple = ()  # interior arm vertices of a pearl


def is_pearl_chain(g: Multigraph) -> Optional[list[ChainPart]]:
    """Decompose ``g`` as edges and pearls in series, edges at both ends."""
    if g.n < 3 or not g.is_simple() or not g.is_connected():
        return None
    nbrs = g.neighbors()
    ends = sorted(v for v in g.vertices if len(nbrs[v]) == 1)
    if len(ends) != 2:
        return None
    parts: list[ChainPart] = []
    visited = {ends[0]}
    x = ends[0]
    used_edges = 0
    while True:
        ahead = sorted(nbrs[x] - visited)
        if not ahead:
            break
        if len(ahead) == 1:
            (y,) = ahead
            parts.append(ChainPart("edge", (x, y)))
            visited.add(y)
            used_edges += 1
            x = y
            continue
        if len(ahead) != 2:
            return None
        meet = []
        arms = []
        inner = []
        for first in ahead:
            prev, cur, length = x, first, 1
            while len(nbrs[cur]) == 2 and cur not in visited:
                inner.append(cur)
                visited.add(cur)
                (nxt,) = nbrs[cur] - {prev}
                prev, cur = cur, nxt
                length += 1
            meet.append(cur)
            arms.append(length)
        z = meet[0]
        if z != meet[1] or z == x or z in visited or min(arms) < 2:
            return None
        parts.append(ChainPart("pearl", (x, z), tuple(arms), tuple(inner)))
        visited.add(z)
        used_edges += sum(arms)
        x = z
    if x != ends[1] or len(visited) != g.n or used_edges != g.m:
        return None
    if parts[0].kind != "edge" or parts[-1].kind != "edge":
        return None
    if sum(p.kind == "edge" for p in parts) < 2:
        return None
    return parts


# --- classification ----------------------------------------------------------


class Verdict(enum.Enum):
    MINIMALLY_TOUGH = "minimally tough"
    NOT_MINIMALLY_TOUGH = "not minimally tough"
    OUT_OF_SCOPE = "out of scope"
    NOT_APPLICABLE = "not applicable"


@dataclass(frozen=True)
class Evidence:
    """``kind``: cycle, no_jump_edges, pearl_chain, jump_edge, substructure,
    edge, loop, parallel_edges, complete, reduced."""

    kind: str
    detail: Any = None


@dataclass(frozen=True)
class ClassificationReport:
    tau: Optional[ToughnessValue]
    verdict: Verdict
    reason: str
    evidence: Optional[Evidence] = None
    tree: Optional[SpTree] = field(default=None, compare=False)

    @property
    def is_minimal(self) -> bool:
        return self.verdict is Verdict.MINIMALLY_TOUGH


def _multi_edge(g: Multigraph) -> Optional[Evidence]:
    seen = {}
    for eid, (a, b) in enumerate(g.edges):
        if a == b:
            return Evidence("loop", eid)
        key = g.edge_key(eid)
        if key in seen:
            return Evidence("parallel_edges", (seen[key], eid))
        seen[key] = eid
    return None


def _cut_vertices(g: Multigraph) -> set:
    from .toughness import components

    base = components(g)
    return {v for v in g.vertices if components(g, [v]) > base}


def _toughness_for_classify(g: Multigraph, cap: int) -> ToughnessValue:
    """Oracle toughness, or for graphs over the cap, toughness of the reduced graph.

    Shortening induced paths keeps the toughness whenever it is below 1, and a
    noncomplete series-parallel graph never exceeds 1, so a reduced value of
    at least 1 means exactly 1.
    """
    if g.n <= cap:
        return toughness(g, cap)
    if is_cycle(g):
        return ToughnessValue("finite", Fraction(1), None)
    r = reduce(g)
    if r.n > cap:
        raise CapacityError(f"reduced graph still has {r.n} vertices (cap {cap})")
    tr = toughness(r, cap)
    if tr.is_finite and tr.value < 1:
        return ToughnessValue("finite", tr.value, None)
    return ToughnessValue("finite", Fraction(1), None)


def _half_evidence(tree: SpTree, lg: LabeledGraph, g: Multigraph) -> Optional[Evidence]:
    """A structural reason why a toughness-1/2 graph is not minimal, if one applies."""
    for kind in (Q2, R(4), RR(3, 3), RR(3, 2), RR(3, 1)):
        occ = match_substructures(tree, kind, lg)
        if occ:
            return Evidence("substructure", occ[0])
    occ21 = match_substructures(tree, RR(2, 1), lg)
    if occ21:
        cuts = _cut_vertices(g)
        info = walk(tree)
        for o in occ21:
            a, b = o.children
            # s1 is the R2 terminal away from the edge
            far = o.graph_vertices[0] if isinstance(info[b].node, Leaf) else o.graph_vertices[1]
            if o.tree_node != 0 or far not in cuts:
                return Evidence("substructure", o)
    info = walk(tree)
    for leaf in jump_edges(tree):
        grand = info[info[leaf].parent].parent
        if grand is not None and grand != 0:
            return Evidence("jump_edge", lg.leaf_to_edge[leaf])
    return None


def classify(
    g: Multigraph,
    tree: Optional[SpTree] = None,
    terminals: Optional[tuple[int, int]] = None,
    cap: int = DEFAULT_CAP,
) -> ClassificationReport:
    """Decide minimal toughness of a series-parallel graph for toughness >= 1/2.

    ``tree`` may be given as a tree whose leaves carry ``g``'s edge ids (as
    returned by :func:`recognize`); otherwise one is recognized.
    """
    bad = _multi_edge(g)
    if bad is not None:
        return ClassificationReport(None, Verdict.NOT_APPLICABLE, "graph has loops or parallel edges", bad)
    if g.is_complete():
        return ClassificationReport(
            ToughnessValue.infinite(), Verdict.NOT_APPLICABLE, "complete graph (toughness is infinite)", Evidence("complete")
        )
    if tree is None:
        if terminals is not None:
            s, t = terminals
            tree = recognize(g, s, t)
            if tree is None:
                raise NotSeriesParallelError(f"not series-parallel between {s} and {t}")
        else:
            found = recognize_any(g)
            if found is None:
                raise NotSeriesParallelError("graph is not series-parallel for any terminal pair")
            tree, s, t = found
        lg = labeled(g, tree, s, t)
    else:
        if terminals is None:
            lg = realize(tree)
            if lg.graph != g:
                raise ValueError("tree without terminals must realize exactly the given graph")
        else:
            lg = labeled(g, tree, *terminals)

    tau = _toughness_for_classify(g, cap)

    def report(verdict, reason, evidence=None):
        return ClassificationReport(tau, verdict, reason, evidence, tree)

    def oracle_edge() -> Optional[Evidence]:
        if g.n > cap:
            return None
        verdict = is_minimally_tough(g, cap)
        if verdict.counterexample_edge is None:
            return None
        return Evidence("edge", verdict.counterexample_edge)

    if tau.is_zero:
        raise ValueError("disconnected input")
    t_val = tau.value
    if t_val > 1:
        return report(Verdict.NOT_MINIMALLY_TOUGH, "toughness above 1", oracle_edge())
    if t_val == 1:
        if is_cycle(g):
            return report(Verdict.MINIMALLY_TOUGH, "cycle", Evidence("cycle", g.n))
        jumps = jump_edges(tree)
        ev = Evidence("jump_edge", lg.leaf_to_edge[jumps[0]]) if jumps else oracle_edge()
        return report(Verdict.NOT_MINIMALLY_TOUGH, "toughness 1 but not a cycle", ev)
    if t_val > HALF:
        jumps = jump_edges(tree)
        if not jumps:
            return report(Verdict.MINIMALLY_TOUGH, "no jump-edges", Evidence("no_jump_edges"))
        return report(Verdict.NOT_MINIMALLY_TOUGH, "has a jump-edge", Evidence("jump_edge", lg.leaf_to_edge[jumps[0]]))
    if t_val == HALF:
        chain = is_pearl_chain(g)
        if chain is not None:
            return report(Verdict.MINIMALLY_TOUGH, "pearl chain", Evidence("pearl_chain", chain))
        ev = _half_evidence(tree, lg, g) or oracle_edge() or Evidence("reduced", "reduced graph is not a necklace")
        return report(Verdict.NOT_MINIMALLY_TOUGH, "toughness 1/2 but not a pearl chain", ev)
    return report(Verdict.OUT_OF_SCOPE, "toughness below 1/2")
