"""Encode edge-labeled graphs, multigraphs and undirected graphs as plain
node-labeled digraphs so the hashers can consume them.

Original nodes get the label ``N:<escaped label>`` and edge nodes get
``E:<escaped label>``; the distinct prefixes keep the two namespaces apart.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .errors import UnknownNode
from .graph import LabeledDigraph, parse_edges, parse_nodes
from .merkle import escape

NODE_TAG = "N:"
EDGE_TAG = "E:"


@dataclass
class EdgeLabeledDigraph:
    """Directed multigraph with text labels on nodes and edges.

    ``edges`` may repeat; a multigraph without edge labels uses ``""``.
    """

    nodes: dict[str, str] = field(default_factory=dict)
    edges: list[tuple[str, str, str]] = field(default_factory=list)

    def __post_init__(self):
        for s, t, _ in self.edges:
            for n in (s, t):
                if n not in self.nodes:
                    raise UnknownNode(n)


@dataclass
class UndirectedGraph:
    nodes: dict[str, str] = field(default_factory=dict)
    edges: set[frozenset[str]] = field(default_factory=set)

    def __post_init__(self):
        self.edges = {frozenset(e) for e in self.edges}
        for e in self.edges:
            for n in e:
                if n not in self.nodes:
                    raise UnknownNode(n)


def _tagged_nodes(nodes: dict[str, str]) -> LabeledDigraph:
    g = LabeledDigraph()
    for n in sorted(nodes):
        g.add_node(n, NODE_TAG + escape(nodes[n]))
    return g


def encode_edge_labels(g: EdgeLabeledDigraph) -> LabeledDigraph:
    """Replace every edge ``s -> t`` by ``s -> mid -> t``, with ``mid`` carrying
    the edge label. Parallel edges each get their own ``mid``.

    ``mid`` ids are ``src|dst|k`` with parallel edges numbered after sorting by
    label; a ``#`` suffix is appended if that collides with an existing id.
    """
    out = _tagged_nodes(g.nodes)
    parallel: dict[tuple[str, str], list[str]] = defaultdict(list)
    for s, t, label in g.edges:
        parallel[(s, t)].append(label)
    for (s, t) in sorted(parallel):
        for k, label in enumerate(sorted(parallel[(s, t)])):
            mid = f"{s}|{t}|{k}"
            while mid in out:
                mid += "#"
            out.add_node(mid, EDGE_TAG + escape(label))
            out.add_edge(s, mid)
            out.add_edge(mid, t)
    return out


def encode_multigraph(nodes: dict[str, str], edges: list[tuple[str, str]]) -> LabeledDigraph:
    return encode_edge_labels(EdgeLabeledDigraph(nodes, [(s, t, "") for s, t in edges]))


def encode_undirected(g: UndirectedGraph) -> LabeledDigraph:
    out = _tagged_nodes(g.nodes)
    for e in g.edges:
        u, v = sorted(e) if len(e) == 2 else (next(iter(e)),) * 2
        out.add_edge(u, v)
        out.add_edge(v, u)
    return out


def edge_labeled_from_json_obj(obj) -> EdgeLabeledDigraph:
    nodes = {}
    for node_id, entry in parse_nodes(obj):
        nodes[node_id] = entry.get("label", "")
    edges = [(e[0], e[1], e[2] if len(e) == 3 else "") for e in parse_edges(obj, (2, 3))]
    return EdgeLabeledDigraph(nodes, edges)


def undirected_from_json_obj(obj) -> UndirectedGraph:
    nodes = {}
    for node_id, entry in parse_nodes(obj):
        nodes[node_id] = entry.get("label", "")
    return UndirectedGraph(nodes, {frozenset(e) for e in parse_edges(obj)})
