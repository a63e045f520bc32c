"""Exact toughness and minimal-toughness tools for series-parallel graphs."""

from .enumeration import EnumerationConfig, enum_trees, enumerate_graphs, realize_stream
from .parser import ArityError, ParseError, parse, read_edge_list, serialize, to_dot, write_edge_list
from .sp_core import (
    LabeledGraph,
    Leaf,
    Multigraph,
    Parallel,
    RecognitionError,
    Series,
    SpTree,
    StructureError,
    canonicalize,
    encode,
    realize,
    recognize,
    recognize_any,
)
from .structure import (
    ClassificationReport,
    NotSeriesParallelError,
    Occurrence,
    SubstructureKind,
    Verdict,
    classify,
    is_cycle,
    is_pearl_chain,
    jump_edges,
    leap_edges,
    match_substructures,
    reduce,
)
from .toughness import (
    CapacityError,
    MinimalityVerdict,
    ToughnessDomainError,
    ToughnessValue,
    components,
    is_minimally_tough,
    mediant,
    tough_sets,
    toughness,
    vertex_connectivity,
)
