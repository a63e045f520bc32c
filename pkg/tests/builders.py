"""Small graph constructors shared by the tests."""

from sptough import Multigraph, canonicalize, parse, realize


def cycle(n):
    return Multigraph.from_edges([(i, (i + 1) % n) for i in range(n)])


def path(n):
    return Multigraph.from_edges([(i, i + 1) for i in range(n - 1)])


def complete(n):
    return Multigraph.from_edges([(i, j) for i in range(n) for j in range(i + 1, n)], vertices=range(n))


def complete_bipartite(a, b):
    return Multigraph.from_edges([(i, a + j) for i in range(a) for j in range(b)])


def graph_of(expr):
    return realize(canonicalize(parse(expr))).graph


def r_graph(i):
    return graph_of("P(" + ",".join(["S(e,e)"] * i) + ")")


def bracelet_with_edge(length):
    """Parallel join of the bracelet B_length with a single edge."""
    bracelet = "S(" + ",".join(["P(S(e,e),S(e,e))"] * length) + ")"
    return graph_of(f"P({bracelet},e)")
