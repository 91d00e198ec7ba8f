"""Colour-aware canonical labelling and automorphism orbits for digraphs.

Individualization-refinement in the nauty family, kept deliberately simple:

* refinement uses a splitter queue, counting out- and in-neighbours into
  each splitter cell, so the result is the coarsest equitable partition
  finer than the input colouring;
* the target cell is the first non-singleton cell;
* a leaf is encoded as the row-major directed adjacency matrix in leaf order,
  followed by the colour of every position; the canonical leaf is the
  lexicographically smallest encoding;
* two leaves with equal encodings differ by an automorphism. Orbits are the
  union-find closure of every automorphism found this way.

Up to ``PRUNE_ABOVE`` vertices the whole search tree is walked, which yields
every automorphism. Above that, a branch is skipped when an already-found
automorphism fixing the current prefix maps an explored sibling onto it.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import GraphError, TooLarge
from .graph import LabeledDigraph

PRUNE_ABOVE = 6
BRUTE_FORCE_LIMIT = 8

Coloring = list[list[str]]


@dataclass
class CanonicalForm:
    order: list[str]
    orbits: list[frozenset[str]]
    automorphism_generators: list[dict[str, str]] = field(default_factory=list)

    @property
    def mapping(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.order)}


def label_coloring(g: LabeledDigraph, labels: dict[str, str] | None = None) -> Coloring:
    """Group vertices by label; classes ordered by label, members by id."""
    if labels is None:
        labels = {n: g.label(n) for n in g.nodes()}
    classes: dict[str, list[str]] = {}
    for n in g.nodes():
        classes.setdefault(labels[n], []).append(n)
    return [classes[k] for k in sorted(classes)]


class _Indexed:
    """Integer view of a graph: vertex i is the i-th node id in sorted order."""

    def __init__(self, n: int, out: list[list[int]], colors: list[list[int]]):
        self.n = n
        self.out = out
        self.ins: list[list[int]] = [[] for _ in range(n)]
        for v, ws in enumerate(out):
            for w in ws:
                self.ins[w].append(v)
        self.colors = colors
        self.color_of = [0] * n
        for c, cell in enumerate(colors):
            for v in cell:
                self.color_of[v] = c

    @classmethod
    def from_graph(cls, g: LabeledDigraph, coloring: Sequence[Iterable[str]]):
        ids = g.nodes()
        pos = {n: i for i, n in enumerate(ids)}
        colors = []
        seen: set[str] = set()
        for cls_ in coloring:
            cell = sorted(pos[n] for n in cls_)
            seen.update(cls_)
            if cell:
                colors.append(cell)
        if seen != set(ids) or sum(len(c) for c in colors) != len(ids):
            raise GraphError("colouring does not partition the vertex set")
        out = [[pos[t] for t in g.successor_set(n)] for n in ids]
        return ids, cls(len(ids), out, colors)


class _Partition:
    """Ordered partition stored nauty-style: ``lab`` lists the vertices cell by
    cell, a cell is named by its first position and ``end[start]`` closes it."""

    __slots__ = ("lab", "start_of", "end", "ncells")

    def __init__(self, lab, start_of, end, ncells):
        self.lab = lab
        self.start_of = start_of
        self.end = end
        self.ncells = ncells

    @classmethod
    def from_cells(cls, n: int, cells: list[list[int]]) -> "_Partition":
        lab: list[int] = []
        start_of = [0] * n
        end = [0] * n
        for cell in cells:
            s = len(lab)
            lab.extend(cell)
            end[s] = len(lab)
            for v in cell:
                start_of[v] = s
        return cls(lab, start_of, end, len(cells))

    def copy(self) -> "_Partition":
        return _Partition(self.lab[:], self.start_of[:], self.end[:], self.ncells)

    def cells(self) -> list[list[int]]:
        out, s, n = [], 0, len(self.lab)
        while s < n:
            out.append(self.lab[s:self.end[s]])
            s = self.end[s]
        return out

    def starts(self) -> list[int]:
        out, s, n = [], 0, len(self.lab)
        while s < n:
            out.append(s)
            s = self.end[s]
        return out

    def first_nonsingleton(self) -> int | None:
        s, n = 0, len(self.lab)
        while s < n:
            if self.end[s] - s > 1:
                return s
            s = self.end[s]
        return None

    def individualize(self, t: int, v: int) -> "_Partition":
        """Copy with ``v`` split off as a singleton at the front of cell ``t``."""
        p = self.copy()
        lab, e = p.lab, p.end[t]
        i = lab.index(v, t, e)
        lab[t], lab[i] = lab[i], lab[t]
        p.end[t] = t + 1
        p.end[t + 1] = e
        for k in range(t + 1, e):
            p.start_of[lab[k]] = t + 1
        p.ncells += 1
        return p


def _refine(ig: _Indexed, part: _Partition, splitters: list[int]) -> None:
    """Refine ``part`` in place to the coarsest equitable partition.

    Each splitter cell splits every cell it touches by the pair (edges into
    the splitter, edges out of the splitter). Parts are ordered by that pair
    and take their parent's place, so the order depends only on structure.
    """
    n = ig.n
    lab, start_of, end = part.lab, part.start_of, part.end
    queue = deque(splitters)
    queued = [False] * n
    for s in splitters:
        queued[s] = True
    to_cell = [0] * n
    from_cell = [0] * n
    while queue and part.ncells < n:
        s = queue.popleft()
        queued[s] = False
        touched: list[int] = []
        for w in lab[s:end[s]]:
            for u in ig.ins[w]:
                if not to_cell[u] and not from_cell[u]:
                    touched.append(u)
                to_cell[u] += 1
            for u in ig.out[w]:
                if not to_cell[u] and not from_cell[u]:
                    touched.append(u)
                from_cell[u] += 1
        for c in sorted({start_of[u] for u in touched}):
            e = end[c]
            if e - c == 1:
                continue
            members = lab[c:e]
            keys = {u: (to_cell[u], from_cell[u]) for u in members}
            k0 = keys[members[0]]
            if all(keys[u] == k0 for u in members):
                continue
            members.sort(key=keys.__getitem__)
            lab[c:e] = members
            parts = []
            ps = c
            for i in range(c + 1, e + 1):
                if i == e or keys[lab[i]] != keys[lab[i - 1]]:
                    parts.append((ps, i))
                    ps = i
            for ps, pe in parts:
                end[ps] = pe
                for i in range(ps, pe):
                    start_of[lab[i]] = ps
            part.ncells += len(parts) - 1
            if queued[c]:
                fresh = parts[1:]
            else:
                # counts into the largest part follow from the others
                big = max(parts, key=lambda p: (p[1] - p[0], -p[0]))
                fresh = [p for p in parts if p != big]
            for ps, _ in fresh:
                queued[ps] = True
                queue.append(ps)
        for u in touched:
            to_cell[u] = from_cell[u] = 0


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


class _Search:
    def __init__(self, ig: _Indexed, prune: bool):
        self.ig = ig
        self.prune = prune
        # (encoding, leaf order, individualized vertices on the way down)
        self.first: tuple[tuple, list[int], list[int]] | None = None
        self.best: tuple[tuple, list[int], list[int]] | None = None
        self.generators: list[tuple[int, ...]] = []
        self.supports: list[list[int]] = []
        self._seen_gens: set[tuple[int, ...]] = set()

    def encode(self, order: list[int]) -> tuple:
        n = self.ig.n
        pos = [0] * n
        for i, v in enumerate(order):
            pos[v] = i
        rows = []
        for v in order:
            mask = 0
            for w in self.ig.out[v]:
                mask |= 1 << (n - 1 - pos[w])
            rows.append(mask)
        return tuple(rows), tuple(self.ig.color_of[v] for v in order)

    def _record_automorphism(self, ref: list[int], order: list[int]) -> None:
        perm = [0] * self.ig.n
        for a, b in zip(ref, order):
            perm[a] = b
        gen = tuple(perm)
        support = [i for i, p in enumerate(gen) if i != p]
        if support and gen not in self._seen_gens:
            self._seen_gens.add(gen)
            self.generators.append(gen)
            self.supports.append(support)

    def leaf(self, order: list[int], path: list[int]) -> int | None:
        """Process a leaf; return the depth to jump back to, if any."""
        enc = self.encode(order)
        if self.first is None:
            self.first = self.best = (enc, order, path)
            return None
        for ref in (self.first, self.best):
            if enc == ref[0]:
                self._record_automorphism(ref[1], order)
                # the automorphism maps the explored sibling subtree where the
                # two paths part onto the current one
                return _common_prefix(path, ref[2])
        if enc < self.best[0]:
            self.best = (enc, order, path)
        return None

    def _descend(self, part: _Partition, path: list[int], splitters: list[int]):
        _refine(self.ig, part, splitters)
        target = part.first_nonsingleton()
        if target is None:
            return None, self.leaf(part.lab, path)
        frame = {"part": part, "path": path, "fixed": set(path), "target": target,
                 "cell": part.lab[target:part.end[target]], "next": 0, "tried": [],
                 "uf": _UnionFind(self.ig.n), "gens_seen": 0}
        return frame, None

    def _pruned(self, frame: dict, v: int) -> bool:
        """True if a known automorphism fixing the path maps a tried sibling to v."""
        uf = frame["uf"]
        fixed = frame["fixed"]
        for k in range(frame["gens_seen"], len(self.generators)):
            support = self.supports[k]
            if fixed.isdisjoint(support):
                gen = self.generators[k]
                for i in support:
                    uf.union(i, gen[i])
        frame["gens_seen"] = len(self.generators)
        root = uf.find(v)
        return any(uf.find(w) == root for w in frame["tried"])

    def run(self, part: _Partition) -> None:
        # explicit stack: a large symmetric cell can need one level per vertex
        root, _ = self._descend(part, [], part.starts())
        stack = [root] if root else []
        while stack:
            frame = stack[-1]
            cell = frame["cell"]
            if frame["next"] == len(cell):
                stack.pop()
                continue
            v = cell[frame["next"]]
            frame["next"] += 1
            if self.prune and frame["tried"] and self._pruned(frame, v):
                continue
            frame["tried"].append(v)
            t = frame["target"]
            child = frame["part"].individualize(t, v)
            nxt, jump = self._descend(child, frame["path"] + [v], [t])
            if nxt:
                stack.append(nxt)
            elif jump is not None and self.prune:
                del stack[jump + 1:]


def _common_prefix(a: list[int], b: list[int]) -> int:
    k = 0
    for x, y in zip(a, b):
        if x != y:
            break
        k += 1
    return k


def _canonize_indexed(ig: _Indexed, prune: bool | None = None):
    """Return (canonical order, orbit union-find, generators) on indices."""
    if prune is None:
        prune = ig.n > PRUNE_ABOVE
    if ig.n == 0:
        return [], _UnionFind(0), []
    search = _Search(ig, prune)
    search.run(_Partition.from_cells(ig.n, ig.colors))
    uf = _UnionFind(ig.n)
    for gen, support in zip(search.generators, search.supports):
        for i in support:
            uf.union(i, gen[i])
    return search.best[1], uf, search.generators


def refine(g: LabeledDigraph, initial: Coloring) -> Coloring:
    """Coarsest equitable refinement of ``initial``.

    Classes are split in place by how many out- and in-neighbours their
    members have in each class; sub-classes are ordered by those counts.
    """
    ids, ig = _Indexed.from_graph(g, initial)
    part = _Partition.from_cells(ig.n, ig.colors)
    _refine(ig, part, part.starts())
    return [[ids[v] for v in cell] for cell in part.cells()]


def canonize(g: LabeledDigraph, colors: Coloring | None = None, *,
             prune: bool | None = None) -> CanonicalForm:
    """Canonical order, orbit partition and discovered automorphisms.

    ``colors`` defaults to the label colouring. Orbits are listed by their
    smallest canonical position.
    """
    if colors is None:
        colors = label_coloring(g)
    ids, ig = _Indexed.from_graph(g, colors)
    order, uf, gens = _canonize_indexed(ig, prune)
    pos = {v: i for i, v in enumerate(order)}
    groups: dict[int, list[int]] = {}
    for v in order:
        groups.setdefault(uf.find(v), []).append(v)
    orbit_list = sorted(groups.values(), key=lambda o: min(pos[v] for v in o))
    return CanonicalForm(
        order=[ids[v] for v in order],
        orbits=[frozenset(ids[v] for v in o) for o in orbit_list],
        automorphism_generators=[{ids[i]: ids[j] for i, j in enumerate(gen)} for gen in gens],
    )


def orbits(g: LabeledDigraph, colors: Coloring | None = None) -> list[frozenset[str]]:
    return canonize(g, colors).orbits


def canonical_adjacency(g: LabeledDigraph, form: CanonicalForm) -> list[tuple[int, int]]:
    pos = form.mapping
    return sorted((pos[s], pos[t]) for s, t in g.edges())


def canonical_labels(g: LabeledDigraph, form: CanonicalForm) -> list[str]:
    return [g.label(n) for n in form.order]


def brute_force_check(g1: LabeledDigraph, g2: LabeledDigraph,
                      limit: int = BRUTE_FORCE_LIMIT) -> bool:
    """Label-preserving isomorphism test by trying every bijection.

    Bijections are enumerated class by class (vertices with equal labels),
    which is still exhaustive over all label-preserving maps.
    """
    if max(len(g1), len(g2)) > limit:
        raise TooLarge(f"brute force is limited to {limit} vertices")
    if len(g1) != len(g2) or g1.edge_count != g2.edge_count:
        return False
    c1, c2 = label_coloring(g1), label_coloring(g2)
    if [g1.label(c[0]) for c in c1] != [g2.label(c[0]) for c in c2]:
        return False
    if [len(c) for c in c1] != [len(c) for c in c2]:
        return False
    edges2 = set(g2.edges())
    src = [n for c in c1 for n in c]
    for parts in itertools.product(*(itertools.permutations(c) for c in c2)):
        image = dict(zip(src, (n for p in parts for n in p)))
        if all((image[s], image[t]) in edges2 for s, t in g1.edges()):
            return True
    return False
