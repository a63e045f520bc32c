"""Command-line interface: ``sptough toughness|classify|verify|render|enumerate``."""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass
from typing import Optional

import click

from . import structure
from .enumeration import EnumerationConfig, enum_trees
from .parser import ParseError, parse, read_edge_list, serialize, to_dot, write_edge_list
from .sp_core import (
    LabeledGraph,
    Multigraph,
    RecognitionError,
    SpTree,
    StructureError,
    canonicalize,
    labeled,
    realize,
    recognize,
)
from .toughness import CapacityError, ToughnessDomainError, is_minimally_tough, toughness
from .verify import run_suites

INPUT_ERROR = 3


@dataclass(frozen=True)
class Loaded:
    graph: Multigraph
    lg: Optional[LabeledGraph] = None
    tree: Optional[SpTree] = None


def load(source: str, terminals: Optional[tuple[int, int]]) -> Loaded:
    """An existing file (or ``-``) is read as an edge list, anything else as an SP expression."""
    if source == "-" or os.path.isfile(source):
        text = sys.stdin.read() if source == "-" else open(source, encoding="utf-8").read()
        g = read_edge_list(text)
        if terminals is None:
            return Loaded(g)
        tree = recognize(g, *terminals)
        if tree is None:
            raise StructureError(f"not series-parallel with terminals {terminals[0]} and {terminals[1]}")
        return Loaded(g, labeled(g, tree, *terminals), tree)
    tree = canonicalize(parse(source))
    lg = realize(tree)
    return Loaded(lg.graph, lg, tree)


def _fail(err: Exception) -> None:
    click.echo(f"error: {err}", err=True)
    sys.exit(INPUT_ERROR)


def _fmt_set(s) -> str:
    return "{" + ", ".join(str(v) for v in sorted(s)) + "}"


terminals_option = click.option(
    "--terminals", nargs=2, type=int, default=None, help="Source and sink vertex ids for edge-list input."
)


@click.group()
def main():
    """Toughness tools for series-parallel graphs."""


@main.command("toughness")
@click.argument("source")
@terminals_option
def cmd_toughness(source, terminals):
    """Print the toughness of SOURCE and a tough set."""
    try:
        g = load(source, terminals).graph
        tau = toughness(g)
    except (ParseError, CapacityError, StructureError, RecognitionError, OSError) as err:
        _fail(err)
    if tau.is_finite:
        click.echo(f"{tau}, tough set {_fmt_set(tau.witness)}")
    else:
        click.echo(str(tau))


def _describe_chain(parts) -> str:
    out = []
    for p in parts:
        out.append("edge" if p.kind == "edge" else "pearl({},{})".format(*p.arms))
    return ", ".join(out)


def _edge_text(g: Multigraph, eid: int) -> str:
    a, b = g.edges[eid]
    return f"e={eid} ({a}-{b})"


@main.command("classify")
@click.argument("source")
@terminals_option
def cmd_classify(source, terminals):
    """Decide whether SOURCE is minimally tough.

    Exit status: 0 minimal, 1 not minimal, 2 out of scope or not applicable.
    """
    try:
        loaded = load(source, terminals)
        g = loaded.graph
        report = structure.classify(g, loaded.tree, terminals if loaded.tree is not None else None)
    except (ParseError, CapacityError, StructureError, RecognitionError, ValueError, OSError) as err:
        _fail(err)
    ev = report.evidence
    if report.verdict is structure.Verdict.MINIMALLY_TOUGH:
        detail = {"cycle": "cycle", "no_jump_edges": "no jump-edges"}.get(ev.kind)
        if ev.kind == "pearl_chain":
            detail = "pearl chain: " + _describe_chain(ev.detail)
        click.echo(f"minimally {report.tau}-tough ({detail})")
        sys.exit(0)
    if report.verdict is structure.Verdict.NOT_MINIMALLY_TOUGH:
        edge = None
        if ev is not None and ev.kind in ("jump_edge", "edge"):
            edge = ev.detail
        elif g.n <= 24:
            edge = is_minimally_tough(g).counterexample_edge
        head = f"not minimal: tau(G-e)=tau(G) for {_edge_text(g, edge)}" if edge is not None else "not minimal"
        click.echo(f"{head}; tau = {report.tau}; {report.reason}")
        if ev is not None and ev.kind == "substructure":
            occ = ev.detail
            click.echo(f"evidence: {occ.kind} at vertices {_fmt_set(occ.graph_vertices)}")
        elif ev is not None and ev.kind == "jump_edge":
            click.echo("evidence: jump-edge")
        sys.exit(1)
    tau = "" if report.tau is None else f"; tau = {report.tau}"
    click.echo(f"{report.verdict.value}: {report.reason}{tau}")
    sys.exit(2)


@main.command("verify")
@click.option("--max-leaves", type=int, default=6, show_default=True)
@click.option("--suite", "suites", default=None, help="Comma-separated suite names (default: all).")
def cmd_verify(max_leaves, suites):
    """Check every structural property over the enumerated universe.

    Prints one ``property<TAB>checked<TAB>failed`` line per suite.
    """
    names = None if suites is None else [s.strip() for s in suites.split(",") if s.strip()]
    try:
        report = run_suites(max_leaves, names)
    except (CapacityError, ValueError) as err:
        _fail(err)
    for line in report.summary_lines():
        click.echo(line)
    click.echo(f"# {report.graphs} simple graphs, {report.multigraphs} with parallel edges, max_leaves={max_leaves}", err=True)
    for s in report.suites:
        if s.counterexample:
            click.echo(f"# {s.name} counterexample: {s.counterexample}", err=True)
    sys.exit(0 if report.ok else 1)


@main.command("render")
@click.argument("source")
@terminals_option
@click.option("--tough-set", is_flag=True, help="Fill the vertices of a tough set.")
@click.option("--jump-edges", is_flag=True, help="Highlight jump-edges.")
def cmd_render(source, terminals, tough_set, jump_edges):
    """Write SOURCE as Graphviz DOT."""
    try:
        loaded = load(source, terminals)
        g = loaded.graph
        filled = ()
        if tough_set:
            tau = toughness(g)
            filled = tau.witness if tau.is_finite else ()
        bold = ()
        if jump_edges:
            if loaded.lg is None:
                raise StructureError("--jump-edges needs an SP expression or --terminals")
            bold = [loaded.lg.leaf_to_edge[leaf] for leaf in structure.jump_edges(loaded.tree)]
    except (ParseError, CapacityError, StructureError, RecognitionError, ToughnessDomainError, OSError) as err:
        _fail(err)
    click.echo(to_dot(loaded.lg if loaded.lg is not None else g, filled, bold), nl=False)


@main.command("enumerate")
@click.option("--max-leaves", type=int, required=True)
@click.option("--simple", is_flag=True, help="Skip trees that realize parallel edges.")
@click.option("--format", "fmt", type=click.Choice(["expr", "edgelist", "dot"]), default="expr", show_default=True)
def cmd_enumerate(max_leaves, simple, fmt):
    """List canonical SP trees, one per line (edge lists and DOT are blank-line separated)."""
    try:
        config = EnumerationConfig(max_leaves, simple_only=simple)
    except (CapacityError, ValueError) as err:
        _fail(err)
    for i, tree in enumerate(enum_trees(config)):
        if fmt == "expr":
            click.echo(serialize(tree))
            continue
        if i:
            click.echo()
        lg = realize(tree)
        if fmt == "edgelist":
            click.echo(f"# {serialize(tree)}")
            click.echo(write_edge_list(lg.graph), nl=False)
        else:
            click.echo(to_dot(lg, name=f"G{i}"), nl=False)


if __name__ == "__main__":
    main()
