"""Node-labeled simple digraph with deterministic iteration and a JSON codec.

Node ids are plain strings. Python compares ``str`` by code point, which is
the same total order as comparing their UTF-8 bytes, so ``sorted()`` gives the
byte-lexicographic order used everywhere in this package.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from typing import Any, Iterable, Iterator, Mapping

from .errors import DuplicateNode, GraphError, UnknownNode

DIGEST_RE = re.compile(r"^[0-9a-f]{64}$")


@dataclass(frozen=True)
class NodeRecord:
    label: str = ""
    hash: str | None = None
    nonrec_hash: str | None = None

    def __post_init__(self):
        if not isinstance(self.label, str):
            raise GraphError(f"label must be text, got {type(self.label).__name__}")
        for name in ("hash", "nonrec_hash"):
            value = getattr(self, name)
            if value is not None and not DIGEST_RE.match(value):
                raise GraphError(f"{name} must be 64 lowercase hex chars, got {value!r}")


class LabeledDigraph:
    """A simple directed graph whose nodes carry a text label.

    Self-loops are allowed, parallel edges are not. ``add_node`` and
    ``add_edge`` return the graph so construction can be chained; once built,
    nothing in this package mutates a graph it was handed.
    """

    def __init__(self):
        self._nodes: dict[str, NodeRecord] = {}
        self._succ: dict[str, set[str]] = {}
        self._pred: dict[str, set[str]] = {}
        self._n_edges = 0

    @classmethod
    def from_parts(cls, nodes: Mapping[str, str] | Iterable[tuple[str, str]],
                   edges: Iterable[tuple[str, str]] = ()) -> LabeledDigraph:
        g = cls()
        items = nodes.items() if isinstance(nodes, Mapping) else nodes
        for node_id, label in items:
            g.add_node(node_id, label)
        for src, dst in edges:
            g.add_edge(src, dst)
        return g

    # construction

    def add_node(self, node_id: str, label: str = "", *, hash: str | None = None,
                 nonrec_hash: str | None = None) -> LabeledDigraph:
        if not isinstance(node_id, str) or not node_id:
            raise GraphError(f"node id must be non-empty text, got {node_id!r}")
        if node_id in self._nodes:
            raise DuplicateNode(node_id)
        self._nodes[node_id] = NodeRecord(label, hash, nonrec_hash)
        self._succ[node_id] = set()
        self._pred[node_id] = set()
        return self

    def add_edge(self, src: str, dst: str) -> LabeledDigraph:
        for n in (src, dst):
            if n not in self._nodes:
                raise UnknownNode(n)
        if dst not in self._succ[src]:
            self._succ[src].add(dst)
            self._pred[dst].add(src)
            self._n_edges += 1
        return self

    # queries

    def __contains__(self, node_id: object) -> bool:
        return node_id in self._nodes

    def __len__(self) -> int:
        return len(self._nodes)

    def __iter__(self) -> Iterator[str]:
        return iter(self.nodes())

    @property
    def edge_count(self) -> int:
        return self._n_edges

    def nodes(self) -> list[str]:
        return sorted(self._nodes)

    def edges(self) -> list[tuple[str, str]]:
        return sorted((s, t) for s, succ in self._succ.items() for t in succ)

    def record(self, node_id: str) -> NodeRecord:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise UnknownNode(node_id) from None

    def label(self, node_id: str) -> str:
        return self.record(node_id).label

    def has_edge(self, src: str, dst: str) -> bool:
        return dst in self._succ.get(src, ())

    def successors(self, node_id: str) -> list[str]:
        if node_id not in self._succ:
            raise UnknownNode(node_id)
        return sorted(self._succ[node_id])

    def predecessors(self, node_id: str) -> list[str]:
        if node_id not in self._pred:
            raise UnknownNode(node_id)
        return sorted(self._pred[node_id])

    def successor_set(self, node_id: str) -> set[str]:
        """Unsorted successor view for hot loops; do not mutate."""
        return self._succ[node_id]

    def subgraph(self, keep: Iterable[str]) -> LabeledDigraph:
        keep = set(keep)
        missing = keep - self._nodes.keys()
        if missing:
            raise UnknownNode(min(missing))
        sub = LabeledDigraph()
        for n in sorted(keep):
            sub._nodes[n] = self._nodes[n]
            sub._succ[n] = set()
            sub._pred[n] = set()
        for s in keep:
            for t in self._succ[s]:
                if t in keep:
                    sub._succ[s].add(t)
                    sub._pred[t].add(s)
                    sub._n_edges += 1
        return sub

    def relabel_ids(self, mapping: Mapping[str, str]) -> LabeledDigraph:
        """Copy of the graph with node ids renamed; labels are untouched."""
        out = LabeledDigraph()
        for n in self.nodes():
            rec = self._nodes[n]
            out.add_node(mapping[n], rec.label, hash=rec.hash, nonrec_hash=rec.nonrec_hash)
        for s, t in self.edges():
            out.add_edge(mapping[s], mapping[t])
        return out

    def with_attrs(self, node_hashes: Mapping[str, str] | None = None,
                   nonrec_hashes: Mapping[str, str] | None = None) -> LabeledDigraph:
        """Copy of the graph with ``hash``/``nonrec_hash`` attributes filled in."""
        out = self.subgraph(self._nodes)
        for n, rec in out._nodes.items():
            out._nodes[n] = replace(
                rec,
                hash=(node_hashes or {}).get(n, rec.hash),
                nonrec_hash=(nonrec_hashes or {}).get(n, rec.nonrec_hash),
            )
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledDigraph):
            return NotImplemented
        return self._nodes == other._nodes and self._succ == other._succ

    def __repr__(self) -> str:
        return f"LabeledDigraph(nodes={len(self)}, edges={self.edge_count})"

    # serialization

    def to_json_obj(self) -> dict[str, Any]:
        nodes = []
        for n in self.nodes():
            rec = self._nodes[n]
            entry: dict[str, Any] = {"id": n, "label": rec.label}
            if rec.hash is not None:
                entry["hash"] = rec.hash
            if rec.nonrec_hash is not None:
                entry["nonrec_hash"] = rec.nonrec_hash
            nodes.append(entry)
        return {"nodes": nodes, "edges": [list(e) for e in self.edges()]}


def dumps(g: LabeledDigraph) -> str:
    """Serialize to the compact graph JSON format, newline-terminated."""
    return json.dumps(g.to_json_obj(), ensure_ascii=False, separators=(",", ":")) + "\n"


def parse_nodes(obj: Any) -> list[tuple[str, dict[str, Any]]]:
    if not isinstance(obj, dict):
        raise GraphError("graph JSON must be an object")
    raw = obj.get("nodes")
    if not isinstance(raw, list):
        raise GraphError('graph JSON needs a "nodes" array')
    out = []
    for entry in raw:
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), str):
            raise GraphError(f"bad node entry: {entry!r}")
        out.append((entry["id"], entry))
    return out


def parse_edges(obj: Any, arity: tuple[int, ...] = (2,)) -> list[list[str]]:
    raw = obj.get("edges", [])
    if not isinstance(raw, list):
        raise GraphError('"edges" must be an array')
    for e in raw:
        if (not isinstance(e, list) or len(e) not in arity
                or not all(isinstance(x, str) for x in e)):
            raise GraphError(f"bad edge entry: {e!r}")
    return raw


def from_json_obj(obj: Any) -> LabeledDigraph:
    g = LabeledDigraph()
    for node_id, entry in parse_nodes(obj):
        label = entry.get("label", "")
        g.add_node(node_id, label, hash=entry.get("hash"), nonrec_hash=entry.get("nonrec_hash"))
    for src, dst in parse_edges(obj):
        g.add_edge(src, dst)
    return g


def loads(text: str) -> LabeledDigraph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"bad JSON: {exc}") from None
    return from_json_obj(obj)
