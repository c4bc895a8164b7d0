"""Set-based Weisfeiler-Leman refinement over sparse (k,c)-supergraphs."""

from .cfi import cfi_expand, cfi_flip_map, cfi_pair, cfi_subgraph
from .errors import GraphFormatError, GuardExceeded, ParameterError, SetWLError
from .graph import (ColoredGraph, canonical_certificate, connected_components, induced_subgraph,
                    load_graph, parse_edge_list, parse_graph6, permute_graph, to_graph6)
from .oracle import brute_force_isomorphic, count_pattern, enumerate_kc_sets
from .reference import distinguish_reference
from .refine import ColorTable, Verdict, distinguish, refine_jointly, run_to_stable
from .supergraph import build_component_map, build_supergraph, dense_counts, supergraph_stats

__all__ = [
    "ColoredGraph", "ColorTable", "GraphFormatError", "GuardExceeded", "ParameterError", "SetWLError",
    "Verdict", "brute_force_isomorphic", "build_component_map", "build_supergraph",
    "canonical_certificate", "cfi_expand", "cfi_flip_map", "cfi_pair", "cfi_subgraph",
    "connected_components", "count_pattern", "dense_counts", "distinguish", "distinguish_reference",
    "enumerate_kc_sets", "induced_subgraph", "load_graph", "parse_edge_list", "parse_graph6",
    "permute_graph", "refine_jointly", "run_to_stable", "supergraph_stats", "to_graph6",
]
