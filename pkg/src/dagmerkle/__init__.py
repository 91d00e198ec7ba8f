"""Structural hashing of directed graphs, cycles included."""
from .canon import (CanonicalForm, brute_force_check, canonical_adjacency, canonize,
                    label_coloring, orbits, refine)
from .errors import (DuplicateElement, DuplicateNode, GraphError, InconsistentCondensation,
                     TooLarge, UnknownNode)
from .graph import LabeledDigraph, NodeRecord, dumps, loads
from .merkle import (H, HashReport, adj_list_to_str, canonical_orbits_mapping, escape,
                     exact_hash_graph, hash_graph, hash_graph_collapsed, hash_scc, hash_strs,
                     invert_list)
from .reductions import (EdgeLabeledDigraph, UndirectedGraph, encode_edge_labels,
                         encode_multigraph, encode_undirected)
from .scc import Condensation, condensation, strongly_connected_components

__version__ = "0.1.0"
