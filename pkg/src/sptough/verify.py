"""Verification harness: checks structural claims against the brute-force oracle
over an enumerated universe of series-parallel graphs."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Callable, Iterator, Optional

import networkx as nx

from . import structure
from .enumeration import EnumerationConfig, enumerate_graphs
from .parser import serialize
from .sp_core import LabeledGraph, Leaf, Multigraph, Parallel, SpTree, encode, height, recognize, walk, children_ids
from .toughness import (
    ToughnessValue,
    components,
    is_minimally_tough,
    tough_sets,
    toughness,
    vertex_connectivity,
)

HALF = Fraction(1, 2)


class Case:
    """One enumerated graph with lazily cached oracle results."""

    def __init__(self, tree: SpTree, lg: LabeledGraph):
        self.tree = tree
        self.lg = lg
        self.g = lg.graph

    @cached_property
    def expr(self) -> str:
        return serialize(self.tree)

    @cached_property
    def tau(self) -> ToughnessValue:
        return toughness(self.g)

    @cached_property
    def deleted(self) -> list[ToughnessValue]:
        return [toughness(self.g.without_edge(e)) for e in range(self.g.m)]

    @cached_property
    def minimal(self) -> bool:
        if not self.tau.is_finite:
            return False
        return all(d < self.tau for d in self.deleted)

    @cached_property
    def tough_sets(self) -> list[frozenset]:
        return tough_sets(self.g) if self.tau.is_finite else []

    @cached_property
    def reduced(self) -> bool:
        return not structure._reducible_paths(self.g)


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failed: int = 0
    counterexample: Optional[str] = None
    seconds: float = 0.0

    def fail(self, case: Case, detail: str) -> None:
        self.failed += 1
        if self.counterexample is None:
            self.counterexample = f"{case.expr}: {detail}"


@dataclass
class VerifyReport:
    max_leaves: int
    graphs: int  # simple universe size
    multigraphs: int = 0  # universe size with parallel edges allowed, when used
    suites: list[SuiteResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(s.failed == 0 for s in self.suites)

    def summary_lines(self) -> list[str]:
        return [f"{s.name}\t{s.checked}\t{s.failed}" for s in self.suites]


Check = Callable[[Case, SuiteResult], None]


# --- toughness-level properties ----------------------------------------------


def check_monotonicity(case: Case, res: SuiteResult) -> None:
    g = case.g
    for u, v in combinations(g.vertices, 2):
        if g.adjacent(u, v):
            continue
        res.checked += 1
        after = toughness(g.with_edge(u, v))
        if after < case.tau:
            res.fail(case, f"adding {u}-{v} lowers toughness {case.tau} -> {after}")


def check_witness(case: Case, res: SuiteResult) -> None:
    if not case.tau.is_finite:
        return
    res.checked += 1
    s = case.tau.witness
    c = components(case.g, s)
    if c < 2 or Fraction(len(s)) != case.tau.value * c:
        res.fail(case, f"witness {sorted(s)} leaves {c} components")


def check_kappa(case: Case, res: SuiteResult) -> None:
    if case.g.is_complete() or not case.tau.is_finite:
        return
    res.checked += 1
    kappa = vertex_connectivity(case.g)
    if kappa < 2 * case.tau.value:
        res.fail(case, f"kappa {kappa} < 2 * {case.tau}")


def check_endpoint_exclusion(case: Case, res: SuiteResult) -> None:
    if not case.minimal:
        return
    for eid, (u, v) in enumerate(case.g.edges):
        if not case.deleted[eid].is_finite:
            continue
        res.checked += 1
        for s in tough_sets(case.g.without_edge(eid)):
            if u in s or v in s:
                res.fail(case, f"tough set {sorted(s)} of G-e, e={u}-{v}, contains an endpoint")
                break


def _is_tough_set(g: Multigraph, tau: Fraction, s: frozenset) -> bool:
    c = components(g, s)
    return c >= 2 and Fraction(len(s)) == tau * c


def check_transfer(case: Case, res: SuiteResult) -> None:
    tau = case.tau
    if not tau.is_finite or tau.value.numerator != 1 or tau.value.denominator < 2:
        return
    for eid, after in enumerate(case.deleted):
        if not after.is_finite or not after < tau:
            continue
        res.checked += 1
        for s in tough_sets(case.g.without_edge(eid)):
            if not _is_tough_set(case.g, tau.value, s):
                res.fail(case, f"tough set {sorted(s)} of G-e{eid} is not tough in G")
                break


def _parts(g: Multigraph, removed) -> list[set]:
    nbrs = g.neighbors()
    removed = set(removed)
    seen = set(removed)
    parts = []
    for v in g.vertices:
        if v in seen:
            continue
        part, stack = {v}, [v]
        seen.add(v)
        while stack:
            for w in nbrs[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    part.add(w)
                    stack.append(w)
        parts.append(part)
    return parts


def _within_one(s, parts) -> bool:
    return sum(1 for p in parts if p & s) <= 1


def check_locality(case: Case, res: SuiteResult) -> None:
    """Tough sets do not straddle a cut vertex, a bridge, or (min size, tau < 1) a 2-cut."""
    g = case.g
    if not case.tau.is_finite:
        return
    sets = case.tough_sets
    for v in g.vertices:
        parts = _parts(g, [v])
        if len(parts) < 2:
            continue
        for s in sets:
            if v in s:
                continue
            res.checked += 1
            if not _within_one(s, parts):
                res.fail(case, f"tough set {sorted(s)} straddles cut vertex {v}")
    for eid in range(g.m):
        sides = _parts(g.without_edge(eid), [])
        if len(sides) < 2:
            continue
        for s in sets:
            res.checked += 1
            if not _within_one(s, sides):
                res.fail(case, f"tough set {sorted(s)} straddles bridge {g.edges[eid]}")
    if case.tau.value >= 1:
        return
    smallest = min(len(s) for s in sets)
    for u, v in combinations(g.vertices, 2):
        parts = _parts(g, [u, v])
        if len(parts) < 2:
            continue
        for s in sets:
            if len(s) != smallest or u in s or v in s:
                continue
            res.checked += 1
            if not _within_one(s, parts):
                res.fail(case, f"minimum tough set {sorted(s)} straddles 2-cut {{{u},{v}}}")


def check_middle(case: Case, res: SuiteResult) -> None:
    if not case.tau.is_finite:
        return
    for kind in (structure.R(2), structure.R(3)):
        for occ in structure.match_substructures(case.tree, kind, case.lg):
            middles = set(occ.graph_vertices[2:])
            for s in case.tough_sets:
                res.checked += 1
                if middles & s:
                    res.fail(case, f"tough set {sorted(s)} contains a middle vertex of {kind}")


# --- structural claims -------------------------------------------------------


def check_classifier(case: Case, res: SuiteResult) -> None:
    if case.tau < HALF:
        return
    res.checked += 1
    report = structure.classify(case.g, case.tree)
    if report.is_minimal != case.minimal:
        res.fail(case, f"classify says {report.verdict.value} ({report.reason}), oracle says minimal={case.minimal}")


def check_theorem1(case: Case, res: SuiteResult) -> None:
    if case.tau != 1:
        return
    res.checked += 1
    if case.minimal != structure.is_cycle(case.g):
        res.fail(case, f"toughness 1, cycle={structure.is_cycle(case.g)}, minimal={case.minimal}")


def check_jump_edge(case: Case, res: SuiteResult) -> None:
    tau = case.tau
    if not (HALF <= tau <= 1):
        return
    info = walk(case.tree)
    for leaf in structure.jump_edges(case.tree):
        grand = info[info[leaf].parent].parent
        if not (tau > HALF or (grand is not None and grand != 0)):
            continue
        res.checked += 1
        eid = case.lg.leaf_to_edge[leaf]
        if case.deleted[eid] != tau:
            res.fail(case, f"jump-edge {case.g.edges[eid]}: tau(G-e) = {case.deleted[eid]} != {tau}")


def check_reduction(case: Case, res: SuiteResult) -> None:
    if not case.tau < 1 or case.tau.is_zero:
        return
    res.checked += 1
    r = structure.reduce(case.g)
    if r.n == case.g.n:
        return
    tr = toughness(r)
    if tr != case.tau:
        res.fail(case, f"tau(r(G)) = {tr} != tau(G) = {case.tau}")
    elif is_minimally_tough(r).is_minimal != case.minimal:
        res.fail(case, f"minimality differs after reduction (G: {case.minimal})")


def _nx(g: Multigraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges)
    return h


def check_confluence(case: Case, res: SuiteResult) -> None:
    if case.g.n > 10:
        return
    res.checked += 1
    ends = structure.reduction_fixpoints(case.g)
    first = _nx(ends[0])
    for other in ends[1:]:
        if not nx.is_isomorphic(first, _nx(other)):
            res.fail(case, f"{len(ends)} reduction orders give non-isomorphic results")
            return


def check_forbidden(case: Case, res: SuiteResult) -> None:
    half_minimal = case.tau == HALF and case.minimal
    for kind in (structure.R(4), structure.Q2, structure.RR(3, 1), structure.RR(3, 2), structure.RR(3, 3)):
        if structure.match_substructures(case.tree, kind, case.lg):
            res.checked += 1
            if half_minimal:
                res.fail(case, f"contains {kind} yet is minimally 1/2-tough")
    if not half_minimal:
        return
    info = walk(case.tree)
    cuts = structure._cut_vertices(case.g)
    for occ in structure.match_substructures(case.tree, structure.RR(2, 1), case.lg):
        res.checked += 1
        _, b = occ.children
        far = occ.graph_vertices[0] if isinstance(info[b].node, Leaf) else occ.graph_vertices[1]
        if occ.tree_node != 0 or far not in cuts:
            res.fail(case, f"R2,1 at node {occ.tree_node} with far terminal {far} in a minimally 1/2-tough graph")


def _is_whole_necklace(case: Case) -> bool:
    kids = children_ids(walk(case.tree))
    return any(
        o.tree_node == 0 and len(o.children) == len(kids.get(0, []))
        for o in structure.match_substructures(case.tree, structure.NECKLACE, case.lg)
    )


def check_height(case: Case, res: SuiteResult) -> None:
    if not (case.tau == HALF and case.minimal and case.reduced):
        return
    res.checked += 1
    h = height(case.tree)
    if h not in (1, 3) or not _is_whole_necklace(case):
        res.fail(case, f"reduced minimally 1/2-tough graph of height {h}, necklace={_is_whole_necklace(case)}")


def check_necklace(case: Case, res: SuiteResult) -> None:
    if not case.reduced or case.g.n < 2:
        return
    res.checked += 1
    chain = structure.is_pearl_chain(case.g) is not None
    neck = _is_whole_necklace(case)
    if chain != neck:
        res.fail(case, f"pearl chain={chain} but necklace={neck}")
    elif neck and not (case.minimal and case.tau == HALF):
        res.fail(case, "necklace is not minimally 1/2-tough")


def check_kriesell(case: Case, res: SuiteResult) -> None:
    if not case.minimal or case.tau < HALF:
        return
    res.checked += 1
    want = math.ceil(2 * case.tau.value)
    if want not in case.g.degrees().values():
        res.fail(case, f"minimally {case.tau}-tough but no vertex of degree {want}")


def check_recognition(case: Case, res: SuiteResult) -> None:
    res.checked += 1
    tree = recognize(case.g, case.lg.s, case.lg.t)
    if tree is None or encode(tree) != encode(case.tree):
        res.fail(case, "recognize(realize(T)) does not recover encode(T)")


def _has_leaf_pair(tree: SpTree) -> bool:
    return any(
        isinstance(rec.node, Parallel) and sum(isinstance(c, Leaf) for c in rec.node.children) >= 2
        for rec in walk(tree)
    )


def check_multigraph(case: Case, res: SuiteResult) -> None:
    if not _has_leaf_pair(case.tree):
        return
    res.checked += 1
    if is_minimally_tough(case.g).is_minimal:
        res.fail(case, "parallel edges yet minimally tough")


SUITES: dict[str, Check] = {
    "monotonicity": check_monotonicity,
    "witness": check_witness,
    "kappa": check_kappa,
    "endpoint_exclusion": check_endpoint_exclusion,
    "transfer": check_transfer,
    "locality": check_locality,
    "middle": check_middle,
    "classifier": check_classifier,
    "theorem1": check_theorem1,
    "jump_edge": check_jump_edge,
    "reduction": check_reduction,
    "confluence": check_confluence,
    "forbidden": check_forbidden,
    "height": check_height,
    "necklace": check_necklace,
    "kriesell": check_kriesell,
    "recognition": check_recognition,
    "multigraph": check_multigraph,
}

# suites that run over trees with parallel edges; the rest use simple graphs
MULTIGRAPH_SUITES = {"multigraph", "recognition"}


def run_suites(max_leaves: int, names: Optional[list[str]] = None) -> VerifyReport:
    names = list(SUITES) if names is None else names
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s): {', '.join(unknown)}; choose from {', '.join(SUITES)}")
    results = {n: SuiteResult(n) for n in names}
    simple_cases = list(_cases(EnumerationConfig(max_leaves, simple_only=True)))
    multi_names = [n for n in names if n in MULTIGRAPH_SUITES]
    multi_cases = list(_cases(EnumerationConfig(max_leaves))) if multi_names else []
    for name in names:
        check = SUITES[name]
        start = time.perf_counter()
        for case in multi_cases if name in MULTIGRAPH_SUITES else simple_cases:
            check(case, results[name])
        results[name].seconds = time.perf_counter() - start
    return VerifyReport(max_leaves, len(simple_cases), len(multi_cases), [results[n] for n in names])


def _cases(config: EnumerationConfig) -> Iterator[Case]:
    for tree, lg in enumerate_graphs(config):
        yield Case(tree, lg)


# --- necklace family ---------------------------------------------------------


def necklace_sequences(max_vertices: int) -> Iterator[tuple[str, ...]]:
    """Every sequence of 'E' and 'R2' components with edges at both ends."""

    def size(seq):
        return len(seq) + 1 + 2 * seq.count("R2")

    def grow(seq):
        if size(seq) > max_vertices:
            return
        if len(seq) >= 2 and seq[-1] == "E":
            yield tuple(seq)
        for part in ("E", "R2"):
            yield from grow(seq + [part])

    yield from grow(["E"])


def necklace_graph(seq) -> Multigraph:
    edges = []
    cur, nxt = 0, 1
    for part in seq:
        if part == "E":
            edges.append((cur, nxt))
            cur, nxt = nxt, nxt + 1
        else:
            end, a, b = nxt, nxt + 1, nxt + 2
            edges += [(cur, a), (a, end), (cur, b), (b, end)]
            cur, nxt = end, nxt + 3
    return Multigraph.from_edges(edges)


def pearl_chain_graph(parts) -> Multigraph:
    """``parts`` holds ``"E"`` or ``(arm1, arm2)`` pearl arm lengths."""
    edges = []
    cur, nxt = 0, 1
    for part in parts:
        if part == "E":
            edges.append((cur, nxt))
            cur, nxt = nxt, nxt + 1
            continue
        end = nxt
        nxt += 1
        for arm in part:
            prev = cur
            for _ in range(arm - 1):
                edges.append((prev, nxt))
                prev, nxt = nxt, nxt + 1
            edges.append((prev, end))
        cur = end
    return Multigraph.from_edges(edges)


@dataclass(frozen=True)
class NecklaceFailure:
    sequence: tuple
    detail: str


def check_necklace_family(max_vertices: int = 14) -> tuple[int, list[NecklaceFailure]]:
    """Each necklace is minimally 1/2-tough and every edge deletion drops toughness to <= 1/3."""
    checked, failures = 0, []
    for seq in necklace_sequences(max_vertices):
        checked += 1
        g = necklace_graph(seq)
        tau = toughness(g)
        if tau != HALF:
            failures.append(NecklaceFailure(seq, f"toughness {tau}"))
            continue
        for eid in range(g.m):
            after = toughness(g.without_edge(eid))
            if not (after.is_zero or after <= Fraction(1, 3)):
                failures.append(NecklaceFailure(seq, f"deleting {g.edges[eid]} leaves toughness {after}"))
                break
    return checked, failures
