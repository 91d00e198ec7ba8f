"""Exact and Merkle-style structural hashing of directed graphs.

All digests are SHA-256 rendered as 64 lowercase hex characters, and every
concatenation happens on that hex text. The byte layout of each hashed string
is part of the public contract:

* exact graph digest:  ``H([<"label">,...],[(s,t),...])``
* node digest:         ``H(<orbit index>,<graph or scc digest>)``
* non-recursive hash:  ``H("<label>",<hash_strs(external successor digests)>)``
* SCC digest:          ``H([<nonrec>,...],[(s,t),...])``
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .canon import _canonize_indexed, _Indexed, canonize, label_coloring
from .errors import DuplicateElement, InconsistentCondensation
from .graph import LabeledDigraph
from .scc import Condensation, condensation


def H(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def adj_list_to_str(adj: Iterable[tuple[int, int]]) -> str:
    return "[" + ",".join(f"({s},{t})" for s, t in adj) + "]"


def hash_strs(strs: Iterable[str]) -> str:
    """Order-insensitive, multiplicity-sensitive digest of a bag of strings."""
    return H(",".join(sorted(strs)))


def invert_list(lst: Iterable) -> dict:
    ret = {}
    for i, elem in enumerate(lst):
        if elem in ret:
            raise DuplicateElement(elem)
        ret[elem] = i
    return ret


def canonical_orbits_mapping(canon_mapping: Mapping, orbits: Iterable[Iterable]) -> dict:
    """Number orbits by their smallest canonical position."""
    ret = {}
    ordered = sorted((list(o) for o in orbits), key=lambda o: min(canon_mapping[n] for n in o))
    for i, orb in enumerate(ordered):
        for n in orb:
            ret[n] = i
    return ret


@dataclass
class HashReport:
    node_hashes: dict[str, str] = field(default_factory=dict)
    scc_hashes: dict[int, str] = field(default_factory=dict)
    nonrec_hashes: dict[str, str] = field(default_factory=dict)
    graph_digest: str = ""

    def to_json_obj(self) -> dict:
        return {"graph": self.graph_digest,
                "nodes": {n: self.node_hashes[n] for n in sorted(self.node_hashes)}}


def exact_hash_graph(g: LabeledDigraph) -> HashReport:
    """Canonize the whole graph and hash it in one piece."""
    form = canonize(g, label_coloring(g))
    canon_mapping = invert_list(form.order)
    canon_adj = sorted((canon_mapping[s], canon_mapping[t]) for s, t in g.edges())
    labels_str = "[" + ",".join('"' + escape(g.label(n)) + '"' for n in form.order) + "]"
    g_hash = H(labels_str + "," + adj_list_to_str(canon_adj))
    orbit_index = canonical_orbits_mapping(canon_mapping, form.orbits)
    return HashReport(
        node_hashes={n: H(f"{orbit_index[n]},{g_hash}") for n in g.nodes()},
        graph_digest=g_hash,
    )


def _check_scc(g: LabeledDigraph, cond: Condensation, scc: int) -> frozenset[str]:
    if not 0 <= scc < len(cond):
        raise InconsistentCondensation(f"no SCC {scc}")
    members = cond.members[scc]
    for n in members:
        if n not in g or cond.scc_of.get(n) != scc:
            raise InconsistentCondensation(f"SCC {scc} member {n!r} does not match the graph")
    return members


def _hash_one_scc(g: LabeledDigraph, cond: Condensation, scc: int,
                  report: HashReport, collapse: bool) -> None:
    members = _check_scc(g, cond, scc)
    ids = sorted(members)
    pos = {n: i for i, n in enumerate(ids)}
    nonrec = []
    for n in ids:
        outside = [report.node_hashes[m] for m in g.successor_set(n) if m not in members]
        h = H('"' + escape(g.label(n)) + '",' + hash_strs(outside))
        report.nonrec_hashes[n] = h
        nonrec.append(h)

    # canonize the SCC with non-recursive hashes as colours
    out = [[pos[t] for t in g.successor_set(n) if t in members] for n in ids]
    classes: dict[str, list[int]] = {}
    for i, h in enumerate(nonrec):
        classes.setdefault(h, []).append(i)
    ig = _Indexed(len(ids), out, [classes[k] for k in sorted(classes)])
    order, uf, _ = _canonize_indexed(ig)
    canon_mapping = invert_list(order)
    orbit_groups: dict[int, list[int]] = {}
    for v in order:
        orbit_groups.setdefault(uf.find(v), []).append(v)
    orbit_index = canonical_orbits_mapping(canon_mapping, orbit_groups.values())

    if collapse:
        n_orbits = len(orbit_groups)
        reps = [None] * n_orbits
        for v in order:
            if reps[orbit_index[v]] is None:
                reps[orbit_index[v]] = v
        node_strs = [nonrec[v] for v in reps]
        adj = sorted({(orbit_index[v], orbit_index[w]) for v in range(len(ids)) for w in out[v]})
    else:
        node_strs = [nonrec[v] for v in order]
        adj = sorted((canon_mapping[v], canon_mapping[w]) for v in range(len(ids)) for w in out[v])

    scc_hash = H("[" + ",".join(node_strs) + "]," + adj_list_to_str(adj))
    cond.hashes[scc] = scc_hash
    report.scc_hashes[scc] = scc_hash
    for v, n in enumerate(ids):
        report.node_hashes[n] = H(f"{orbit_index[v]},{scc_hash}")


def hash_scc(g: LabeledDigraph, cond: Condensation, scc: int,
             report: HashReport | None = None, *, collapse: bool = False) -> HashReport:
    """Hash ``scc`` after every SCC reachable from it.

    A no-op for SCCs whose slot in ``cond.hashes`` is already filled. The
    dependency walk uses an explicit stack, so long chains of SCCs are fine.
    """
    if report is None:
        report = HashReport()
    stack = [(scc, False)]
    while stack:
        c, expanded = stack.pop()
        if cond.hashes[c] is not None:
            continue
        if expanded:
            _hash_one_scc(g, cond, c, report, collapse)
            continue
        stack.append((c, True))
        for succ in reversed(cond.successors(c)):
            if cond.hashes[succ] is None:
                stack.append((succ, False))
    return report


def _hash_graph(g: LabeledDigraph, collapse: bool) -> HashReport:
    cond = condensation(g)
    report = HashReport()
    # sinks first, so each hash_scc call finds its successors already done
    for scc in reversed(cond.topological_order()):
        hash_scc(g, cond, scc, report, collapse=collapse)
    # whole-graph digest: a bag of node digests, not an isomorphism invariant
    # strong enough to separate non-isomorphic graphs. Collapsed hashing counts
    # each distinct digest once, like the orbits it stands for.
    digests = report.node_hashes.values()
    report.graph_digest = hash_strs(set(digests) if collapse else digests)
    report.node_hashes = {n: report.node_hashes[n] for n in sorted(report.node_hashes)}
    report.nonrec_hashes = {n: report.nonrec_hashes[n] for n in sorted(report.nonrec_hashes)}
    report.scc_hashes = dict(sorted(report.scc_hashes.items()))
    return report


def hash_graph(g: LabeledDigraph) -> HashReport:
    """Merkle-style hash: a node's digest depends only on what it can reach."""
    return _hash_graph(g, collapse=False)


def hash_graph_collapsed(g: LabeledDigraph) -> HashReport:
    """Like :func:`hash_graph`, but each SCC is quotiented by its orbits first.

    Orbit members become one vertex; edges inside an orbit become a self-loop.
    A 2-cycle and a 3-cycle of identical nodes therefore hash the same, and
    ``graph_digest`` is taken over the distinct node digests so it agrees too.
    """
    return _hash_graph(g, collapse=True)
