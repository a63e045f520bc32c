from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings

from sptough import (
    Multigraph,
    NotSeriesParallelError,
    StructureError,
    Verdict,
    canonicalize,
    classify,
    is_cycle,
    is_minimally_tough,
    is_pearl_chain,
    jump_edges,
    leap_edges,
    match_substructures,
    parse,
    realize,
    reduce,
    toughness,
)
from sptough.sp_core import Leaf, Parallel, walk
from sptough.structure import (
    NECKLACE,
    P2,
    PEARL,
    Q2,
    Bracelet,
    NotSimpleError,
    R,
    RR,
    reduction_fixpoints,
)
from sptough.verify import necklace_graph, pearl_chain_graph

from builders import complete, complete_bipartite, cycle, graph_of, path
from strategies import trees

FIG9 = ["E", "E", (3, 4), "E", (4, 2), (2, 3), "E", "E", "E", "E", (2, 2), "E"]
FIG7 = ["E", "R2", "E", "R2", "R2", "E", "E", "R2", "E"]


def nxg(g):
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges)
    return h


def count_pearls(parts):
    return sum(p.kind == "pearl" for p in parts)


class TestReduce:
    def test_path(self):
        r = reduce(path(5))
        assert (r.n, r.m) == (3, 2)

    def test_c6_to_c4(self):
        r = reduce(cycle(6))
        assert is_cycle(r) and r.n == 4

    def test_c5_step(self):
        r = reduce(cycle(5))
        assert r.n == 4

    def test_c4_fixed(self):
        assert reduce(cycle(4)) == cycle(4)

    def test_non_simple_rejected(self):
        with pytest.raises(NotSimpleError):
            reduce(Multigraph.from_edges([(0, 1), (0, 1), (1, 2)]))

    def test_pearl_chain_goes_to_necklace(self):
        r = reduce(pearl_chain_graph(FIG9))
        parts = is_pearl_chain(r)
        assert parts is not None
        assert count_pearls(parts) == count_pearls(is_pearl_chain(necklace_graph(FIG7))) == 4
        assert all(p.arms == (2, 2) for p in parts if p.kind == "pearl")

    def test_deterministic_choice(self):
        # 0-1-2-3-4-5 path: the least interior is {1, 2}, kept as vertex 1
        g = path(6)
        r = reduce(g)
        assert 1 in r.vertices and r.n == 3

    def test_confluence_small(self):
        for g in (cycle(7), path(7), pearl_chain_graph(["E", (3, 4), "E"])):
            ends = reduction_fixpoints(g)
            assert all(nx.is_isomorphic(nxg(ends[0]), nxg(h)) for h in ends)


class TestLeapJump:
    def test_q2_inside_series_has_jump(self):
        tree = parse("S(e,P(e,S(e,e)),e)")
        jumps = jump_edges(tree)
        info = walk(tree)
        assert len(jumps) == 1 and isinstance(info[info[jumps[0]].parent].node, Parallel)

    def test_single_series_sibling_is_leap(self):
        tree = parse("P(e,S(e,e))")
        assert jump_edges(tree) == [] and leap_edges(tree) == [1]

    def test_two_series_siblings_is_jump(self):
        tree = parse("P(e,S(e,e),S(e,e))")
        assert jump_edges(tree) == [1] and leap_edges(tree) == []

    def test_series_root_has_no_leaps(self):
        assert leap_edges(parse("S(e,P(e,S(e,e)),e)")) == []

    def test_parallel_pair_same_type(self):
        tree = parse("P(e,e)")
        assert leap_edges(tree) == [1, 2]
        tree = parse("S(e,P(e,e,S(e,e)))")
        assert len(jump_edges(tree)) == 2

    def test_non_alternating_rejected(self):
        with pytest.raises(StructureError):
            jump_edges(parse("S(S(e,e),e)"))

    @settings(max_examples=200)
    @given(trees())
    def test_partition(self, tree):
        tree = canonicalize(tree)
        jumps, leaps = set(jump_edges(tree)), set(leap_edges(tree))
        info = walk(tree)
        under_parallel = {
            r.id for r in info if isinstance(r.node, Leaf) and r.parent is not None and isinstance(info[r.parent].node, Parallel)
        }
        assert not (jumps & leaps)
        assert jumps | leaps == under_parallel


class TestSubstructures:
    def test_r3_counts(self):
        tree = parse("P(S(e,e),S(e,e),S(e,e))")
        assert len(match_substructures(tree, P2)) == 3
        assert len(match_substructures(tree, R(3))) == 1
        assert len(match_substructures(tree, R(2))) == 3

    def test_bracelet_one_and_r21(self):
        tree = parse("S(e,P(S(e,e),S(e,e)),e)")
        assert len(match_substructures(tree, Bracelet(1))) == 1
        assert len(match_substructures(tree, R(2))) == 1
        assert len(match_substructures(tree, RR(2, 1))) == 2

    def test_q2_with_extra_sibling(self):
        occ = match_substructures(parse("P(S(e,e),e,S(e,e))"), Q2)
        assert occ and all(o.tree_node == 0 for o in occ)

    def test_non_root_must_be_exact(self):
        # the R2 under the series node has an extra leaf child, so it is not an exact R2 for R2,1
        tree = parse("S(e,P(S(e,e),S(e,e),e))")
        assert match_substructures(tree, RR(2, 1)) == []
        assert len(match_substructures(tree, R(2))) == 1

    def test_rr_kind_rules(self):
        assert RR(1, 1) == P2
        assert RR(1, 3) == RR(3, 1)
        with pytest.raises(ValueError):
            R(1)

    def test_bracelet_length(self):
        r2 = "P(S(e,e),S(e,e))"
        tree = parse(f"S({r2},{r2},{r2})")
        assert len(match_substructures(tree, Bracelet(2))) == 2
        assert len(match_substructures(tree, Bracelet(3))) == 1
        assert match_substructures(tree, Bracelet(4)) == []

    def test_pearl(self):
        occ = match_substructures(parse("P(S(e,e,e),S(e,e))"), PEARL)
        assert len(occ) == 1 and len(occ[0].graph_vertices) == 5

    def test_necklace_whole_graph(self):
        tree = parse("S(e,P(S(e,e),S(e,e)),e)")
        occ = match_substructures(tree, NECKLACE)
        # the two P2 arms are paths, hence necklaces too
        assert sorted(o.tree_node for o in occ) == [0, 3, 6]
        assert occ[0].children == (1, 2, 9)

    def test_vertices_match_edges(self):
        tree = parse("S(e,P(S(e,e),S(e,e)),e)")
        lg = realize(tree)
        (occ,) = match_substructures(tree, R(2), lg)
        s, t, v1, v2 = occ.graph_vertices
        for v in (v1, v2):
            assert lg.graph.adjacent(s, v) and lg.graph.adjacent(v, t)


class TestCycleAndChain:
    def test_cycle(self):
        assert is_cycle(cycle(3))
        assert not is_cycle(cycle(4).with_edge(0, 2))
        assert not is_cycle(path(3))

    def test_p3_chain(self):
        parts = is_pearl_chain(path(3))
        assert [p.kind for p in parts] == ["edge", "edge"]

    def test_c4_not_chain(self):
        assert is_pearl_chain(cycle(4)) is None

    def test_fig9_order(self):
        parts = is_pearl_chain(pearl_chain_graph(FIG9))
        got = ["E" if p.kind == "edge" else p.arms for p in parts]
        assert got == FIG9

    def test_short_arm_rejected(self):
        # triangle as a "pearl": arm of length 1
        assert is_pearl_chain(graph_of("S(e,P(e,S(e,e)),e)")) is None

    def test_pearl_at_end_rejected(self):
        assert is_pearl_chain(graph_of("S(e,P(S(e,e),S(e,e)))")) is None


class TestClassify:
    def test_c7(self):
        rep = classify(cycle(7))
        assert rep.verdict is Verdict.MINIMALLY_TOUGH and rep.tau == 1 and rep.evidence.kind == "cycle"

    def test_c6_as_parallel_join(self):
        rep = classify(graph_of("P(S(e,e,e),S(e,e,e))"))
        assert rep.is_minimal and rep.tau == 1

    def test_k23(self):
        rep = classify(complete_bipartite(2, 3))
        assert rep.is_minimal and rep.tau == Fraction(2, 3)

    def test_q2_half(self):
        tree = canonicalize(parse("S(e,P(e,S(e,e)),e)"))
        g = realize(tree).graph
        rep = classify(g, tree)
        assert rep.tau == Fraction(1, 2) and rep.verdict is Verdict.NOT_MINIMALLY_TOUGH
        assert rep.evidence.kind == "substructure" and rep.evidence.detail.kind == Q2

    def test_r4(self):
        rep = classify(complete_bipartite(2, 4))
        assert rep.verdict is Verdict.NOT_MINIMALLY_TOUGH

    def test_out_of_scope(self):
        rep = classify(graph_of("S(e,P(S(e,e),S(e,e),S(e,e)),e)"))
        assert rep.verdict is Verdict.OUT_OF_SCOPE and rep.tau == Fraction(2, 5)

    def test_complete(self):
        for n in (1, 2, 3):
            assert classify(complete(n)).verdict is Verdict.NOT_APPLICABLE

    def test_multigraph(self):
        rep = classify(Multigraph.from_edges([(0, 1), (0, 1), (1, 2)]))
        assert rep.verdict is Verdict.NOT_APPLICABLE and rep.evidence.kind == "parallel_edges"

    def test_not_sp(self):
        with pytest.raises(NotSeriesParallelError):
            classify(complete(5).without_edge(0))

    def test_fig9_above_cap(self):
        g = pearl_chain_graph(FIG9)
        assert g.n > 24
        rep = classify(g)
        assert rep.is_minimal and rep.tau == Fraction(1, 2) and rep.evidence.kind == "pearl_chain"

    def test_large_cycle(self):
        rep = classify(cycle(30))
        assert rep.is_minimal and rep.tau == 1

    def test_tree_terminals_are_used(self):
        tree = canonicalize(parse("P(S(e,e,e),S(e,e))"))
        lg = realize(tree)
        assert classify(lg.graph, tree).is_minimal

    def test_minimal_implies_range(self):
        for expr in ("S(e,e)", "P(S(e,e),S(e,e),S(e,e))", "S(e,P(S(e,e),S(e,e)),e)"):
            rep = classify(graph_of(expr))
            assert rep.is_minimal and Fraction(1, 2) <= rep.tau <= 1

    @settings(max_examples=60, deadline=None)
    @given(trees(max_leaves=9))
    def test_agrees_with_oracle(self, tree):
        tree = canonicalize(tree)
        lg = realize(tree)
        g = lg.graph
        if not g.is_simple():
            assert classify(g, tree).verdict is Verdict.NOT_APPLICABLE
            return
        rep = classify(g, tree)
        if toughness(g) >= Fraction(1, 2):
            assert rep.is_minimal == is_minimally_tough(g).is_minimal


def test_middles_avoided_when_r2_is_a_proper_part():
    # the lone exception is C4 itself, where {v1, v2} is a tough set
    from sptough.enumeration import trees_with_leaves
    from sptough import tough_sets

    checked = 0
    for n in range(5, 9):
        for tree in trees_with_leaves(n, simple_only=True):
            lg = realize(tree)
            occ = match_substructures(tree, R(2), lg)
            if not occ or toughness(lg.graph).is_infinite:
                continue
            middles = {v for o in occ for v in o.graph_vertices[2:]}
            for s in tough_sets(lg.graph):
                assert not (s & middles), (tree, s)
            checked += 1
    assert checked > 20
