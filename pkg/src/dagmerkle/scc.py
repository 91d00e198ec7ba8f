"""Strongly connected components and the condensation DAG."""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .graph import LabeledDigraph


def strongly_connected_components(g: LabeledDigraph) -> list[frozenset[str]]:
    """Tarjan's algorithm with an explicit stack.

    Components are returned sorted by their smallest node id.
    """
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    found: list[frozenset[str]] = []
    counter = 0

    for root in g.nodes():
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(g.successors(root)))]
        while work:
            v, children = work[-1]
            for w in children:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(g.successors(w))))
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    if low[v] < low[parent]:
                        low[parent] = low[v]
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    found.append(frozenset(comp))

    return sorted(found, key=min)


@dataclass
class Condensation:
    """DAG of SCCs. ``hashes`` holds one write-once digest slot per SCC."""

    members: list[frozenset[str]]
    scc_of: dict[str, int]
    succ: list[list[int]]
    hashes: list[str | None] = field(default_factory=list)

    def __post_init__(self):
        if not self.hashes:
            self.hashes = [None] * len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a, out in enumerate(self.succ) for b in out]

    def successors(self, scc: int) -> list[int]:
        return self.succ[scc]

    def topological_order(self) -> list[int]:
        """Sources first (Kahn's algorithm, smallest id breaks ties)."""
        indeg = [0] * len(self.members)
        for out in self.succ:
            for b in out:
                indeg[b] += 1
        ready = [i for i, d in enumerate(indeg) if d == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            a = heapq.heappop(ready)
            order.append(a)
            for b in self.succ[a]:
                indeg[b] -= 1
                if indeg[b] == 0:
                    heapq.heappush(ready, b)
        if len(order) != len(self.members):
            raise ValueError("condensation contains a cycle")
        return order


def condensation(g: LabeledDigraph) -> Condensation:
    members = strongly_connected_components(g)
    scc_of = {n: i for i, comp in enumerate(members) for n in comp}
    succ: list[set[int]] = [set() for _ in members]
    for s, t in g.edges():
        a, b = scc_of[s], scc_of[t]
        if a != b:
            succ[a].add(b)
    return Condensation(members, scc_of, [sorted(s) for s in succ])
