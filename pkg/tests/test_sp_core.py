from collections import Counter

import networkx as nx
import pytest
from hypothesis import given, settings

from sptough import (
    Leaf,
    Multigraph,
    Parallel,
    RecognitionError,
    Series,
    StructureError,
    canonicalize,
    encode,
    parse,
    realize,
    recognize,
    recognize_any,
    serialize,
)
from sptough.sp_core import is_alternating, is_canonical, leaf_count, node_terminals, reverse, walk
from sptough.enumeration import trees_with_leaves

from builders import complete, complete_bipartite, cycle
from strategies import trees

e = Leaf()


def as_nx(g: Multigraph, s=None, t=None):
    h = nx.MultiGraph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges)
    for v in h.nodes:
        h.nodes[v]["term"] = v in (s, t)
    return h


def iso(a, b):
    return nx.is_isomorphic(a, b, node_match=lambda x, y: x["term"] == y["term"])


class TestMultigraph:
    def test_parallel_edges_and_loops_are_kept(self):
        g = Multigraph.from_edges([(0, 1), (0, 1), (1, 1)])
        assert g.m == 3
        assert g.has_parallel_edges() and g.has_loops()
        assert not g.is_simple()

    def test_rejects_unknown_endpoint(self):
        with pytest.raises(ValueError):
            Multigraph((0, 1), ((0, 2),))

    def test_without_edge_keeps_vertices(self):
        g = cycle(4).without_edge(0)
        assert g.n == 4 and g.m == 3

    def test_complete_and_connected(self):
        assert complete(4).is_complete()
        assert not cycle(4).is_complete()
        assert not Multigraph.from_edges([(0, 1), (2, 3)]).is_connected()


class TestCanonicalize:
    def test_flattens_series(self):
        assert canonicalize(Series((Series((e, e)), e))) == Series((e, e, e))

    def test_flattens_parallel(self):
        tree = canonicalize(Parallel((e, Parallel((Series((e, e)), Series((e, e)))))))
        assert isinstance(tree, Parallel)
        assert Counter(serialize(c) for c in tree.children) == Counter({"S(e,e)": 2, "e": 1})
        assert is_alternating(tree)

    def test_series_order_kept(self):
        tree = canonicalize(parse("S(e,P(e,S(e,e)),e,e)"))
        assert [serialize(c) for c in tree.children] == ["e", "P(S(e,e),e)", "e", "e"]

    def test_rejects_unary_node(self):
        with pytest.raises(StructureError):
            canonicalize(Series((e,)))

    @settings(max_examples=300)
    @given(trees())
    def test_idempotent(self, tree):
        once = canonicalize(tree)
        assert canonicalize(once) == once
        assert is_canonical(once)

    @settings(max_examples=200)
    @given(trees(max_leaves=9))
    def test_realization_preserved(self, tree):
        a, b = realize(tree), realize(canonicalize(tree))
        assert iso(as_nx(a.graph, a.s, a.t), as_nx(b.graph, b.s, b.t))


class TestRealize:
    def test_leaf_is_k2(self):
        lg = realize(e)
        assert (lg.graph.n, lg.graph.m, lg.s, lg.t) == (2, 1, 0, 1)

    def test_r2_is_c4(self):
        g = realize(parse("P(S(e,e),S(e,e))")).graph
        assert iso(as_nx(g), as_nx(cycle(4)))

    def test_r3_is_k23(self):
        g = realize(parse("P(S(e,e),S(e,e),S(e,e))")).graph
        assert iso(as_nx(g), as_nx(complete_bipartite(2, 3)))

    @given(trees())
    def test_leaf_map_is_bijective(self, tree):
        lg = realize(tree)
        assert sorted(lg.leaf_to_edge.values()) == list(range(lg.graph.m))
        assert lg.graph.m == leaf_count(tree)
        assert lg.graph.is_connected()

    def test_node_terminals_of_series(self):
        tree = parse("S(e,e,e)")
        lg = realize(tree)
        terms = node_terminals(tree, lg)
        assert terms[0] == (0, 1)
        joins = [terms[rec.id] for rec in walk(tree) if rec.parent == 0]
        assert joins[0][0] == 0 and joins[-1][1] == 1
        assert all(a[1] == b[0] for a, b in zip(joins, joins[1:]))


class TestEncode:
    def test_leaf(self):
        assert encode(e) == "e"

    def test_parallel_order_ignored(self):
        a = parse("P(S(e,e),S(e,P(e,S(e,e))))")
        b = parse("P(S(e,P(e,S(e,e))),S(e,e))")
        assert encode(a) == encode(b)

    @given(trees())
    def test_reversal_ignored(self, tree):
        assert encode(tree) == encode(reverse(tree))

    def test_symmetric_series_swap(self):
        a, b = parse("P(S(e,e),e)"), parse("S(e,e,e)")
        assert encode(Series((a, b))) == encode(Series((b, a)))

    def test_series_swap_can_change_the_graph(self):
        x = parse("P(S(e,P(e,S(e,e))),S(e,e))")
        left, right = realize(Series((x, e))), realize(Series((e, x)))
        assert not iso(as_nx(left.graph, left.s, left.t), as_nx(right.graph, right.s, right.t))
        assert encode(Series((x, e))) != encode(Series((e, x)))

    def test_complete_invariant_up_to_six_leaves(self):
        universe = [t for n in range(1, 7) for t in trees_with_leaves(n)]
        graphs = [(encode(t), as_nx(realize(t).graph, 0, 1)) for t in universe]
        for i, (ka, ga) in enumerate(graphs):
            for kb, gb in graphs[i + 1:]:
                if ga.number_of_edges() == gb.number_of_edges() and ga.number_of_nodes() == gb.number_of_nodes():
                    assert (ka == kb) == iso(ga, gb)


class TestRecognize:
    def test_c4_opposite_terminals(self):
        tree = recognize(cycle(4), 0, 2)
        assert encode(tree) == "P(S(e,e),S(e,e))"

    def test_k4_is_not_sp(self):
        for s in range(4):
            for t in range(4):
                if s != t:
                    assert recognize(complete(4), s, t) is None
        assert recognize_any(complete(4)) is None

    def test_single_edge(self):
        assert isinstance(recognize(Multigraph.from_edges([(0, 1)]), 0, 1), Leaf)

    def test_disconnected_is_an_error(self):
        with pytest.raises(RecognitionError):
            recognize(Multigraph.from_edges([(0, 1), (2, 3)]), 0, 1)

    def test_leaves_carry_edge_ids(self):
        g = cycle(5)
        tree = recognize(g, 0, 2)
        ids = sorted(rec.node.edge for rec in walk(tree) if isinstance(rec.node, Leaf))
        assert ids == list(range(g.m))

    @settings(max_examples=200)
    @given(trees(max_leaves=10))
    def test_recovers_encoding(self, tree):
        lg = realize(tree)
        assert encode(recognize(lg.graph, lg.s, lg.t)) == encode(canonicalize(tree))
