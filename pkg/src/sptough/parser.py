"""Text formats: SP expressions, edge lists and Graphviz DOT output.

SP expression grammar (whitespace is ignored between tokens)::

    expr := "e" | "S(" expr ("," expr)+ ")" | "P(" expr ("," expr)+ ")"
"""

from __future__ import annotations

from typing import Iterable, Optional, Union

from .sp_core import LabeledGraph, Leaf, Multigraph, Parallel, Series, SpTree, check_tree


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class ArityError(ParseError):
    """A join with fewer than two operands."""


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def where(self, pos: Optional[int] = None) -> tuple[int, int]:
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        column = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, column

    def fail(self, message: str, pos: Optional[int] = None, cls=ParseError):
        raise cls(message, *self.where(pos))

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, expected: str) -> None:
        got = self.peek()
        if got != expected:
            found = repr(got) if got else "end of input"
            self.fail(f"expected {expected!r}, found {found}")
        self.pos += 1

    def expr(self) -> SpTree:
        start = self.peek()
        here = self.pos
        if start == "e":
            self.pos += 1
            return Leaf()
        if start in ("S", "P"):
            self.pos += 1
            self.take("(")
            items = [self.expr()]
            while self.peek() == ",":
                self.pos += 1
                items.append(self.expr())
            self.take(")")
            if len(items) < 2:
                self.fail(f"{start}(...) needs at least two operands", here, ArityError)
            return (Series if start == "S" else Parallel)(tuple(items))
        found = repr(start) if start else "end of input"
        self.fail(f"expected 'e', 'S(' or 'P(', found {found}")


def parse(text: str) -> SpTree:
    """Parse an SP expression into a tree, without canonicalizing it."""
    reader = _Reader(text)
    tree = reader.expr()
    if reader.peek():
        reader.fail(f"unexpected {reader.peek()!r} after expression")
    return tree


def serialize(tree: SpTree) -> str:
    check_tree(tree)
    return _ser(tree)


def _ser(tree: SpTree) -> str:
    if isinstance(tree, Leaf):
        return "e"
    tag = "S" if isinstance(tree, Series) else "P"
    return tag + "(" + ",".join(_ser(c) for c in tree.children) + ")"


def read_edge_list(text: str) -> Multigraph:
    """One ``u v`` pair per line; ``#`` starts a comment.  Repeats stay parallel."""
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = line.split()
        if not tokens:
            continue
        if len(tokens) != 2:
            raise ParseError(f"expected two vertex ids, got {len(tokens)} token(s)", lineno, 1)
        pair = []
        for tok in tokens:
            column = raw.index(tok) + 1
            if not tok.isdigit():
                raise ParseError(f"not a non-negative integer: {tok!r}", lineno, column)
            pair.append(int(tok))
        edges.append(tuple(pair))
    return Multigraph.from_edges(edges)


def write_edge_list(g: Multigraph) -> str:
    return "".join(f"{a} {b}\n" for a, b in g.edges)


def to_dot(
    g: Union[LabeledGraph, Multigraph],
    tough_set: Iterable[int] = (),
    highlight_edges: Iterable[int] = (),
    name: str = "G",
) -> str:
    """Undirected DOT text, one edge statement per multigraph edge.

    Terminals of a :class:`LabeledGraph` are drawn as double circles; vertices
    in ``tough_set`` are filled, edges in ``highlight_edges`` are bold red.
    """
    terminals = {}
    if isinstance(g, LabeledGraph):
        terminals = {g.s: "s", g.t: "t"}
        g = g.graph
    filled = set(tough_set)
    bold = set(highlight_edges)
    lines = [f"graph {name} {{", "  node [shape=circle];"]
    for v in g.vertices:
        attrs = []
        if v in terminals:
            attrs += ["shape=doublecircle", f'xlabel="{terminals[v]}"']
        if v in filled:
            attrs += ["style=filled", "fillcolor=gray"]
        lines.append(f"  {v}" + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
    for eid, (a, b) in enumerate(g.edges):
        attrs = ["color=red", "penwidth=2"] if eid in bold else []
        lines.append(f"  {a} -- {b}" + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
    lines.append("}")
    return "\n".join(lines) + "\n"
