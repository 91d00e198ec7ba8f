import hashlib
import random

import pytest

from dagmerkle.canon import brute_force_check, orbits
from dagmerkle.errors import DuplicateElement, InconsistentCondensation
from dagmerkle.graph import LabeledDigraph
from dagmerkle.merkle import (adj_list_to_str, canonical_orbits_mapping, escape,
                              exact_hash_graph, hash_graph, hash_graph_collapsed, hash_scc,
                              hash_strs, invert_list)
from dagmerkle.scc import condensation

from example_graphs import (cycle, diamond_shared, diamond_split, orbit_fixing_left,
                            orbit_fixing_right, triangle)
from oracles import random_digraph, random_relabel, reachable_from

HASHERS = [exact_hash_graph, hash_graph, hash_graph_collapsed]


def sha(text):
    return hashlib.sha256(text.encode()).hexdigest()


EMPTY = sha("")


# string helpers

@pytest.mark.parametrize("raw,escaped", [("abc", "abc"), ('a"b', 'a\\"b'), ("a\\b", "a\\\\b"),
                                         ("", ""), ('\\"', '\\\\\\"')])
def test_escape(raw, escaped):
    assert escape(raw) == escaped


def test_escape_injective_on_quoted_context():
    samples = ["", "a", '"', "\\", '\\"', '"\\', "a,b", '",', '\\",']
    quoted = {'"' + escape(s) + '"' for s in samples}
    assert len(quoted) == len(samples)


@pytest.mark.parametrize("adj,text", [([], "[]"), ([(0, 1)], "[(0,1)]"),
                                      ([(0, 1), (1, 2)], "[(0,1),(1,2)]"),
                                      ([(10, 3)], "[(10,3)]")])
def test_adj_list_to_str(adj, text):
    assert adj_list_to_str(adj) == text


def test_hash_strs():
    x, y = sha("x"), sha("y")
    assert hash_strs([x, y]) == hash_strs([y, x])
    assert hash_strs([]) == EMPTY
    assert hash_strs([x, x]) == sha(x + "," + x)
    assert hash_strs([x]) == sha(x)
    assert hash_strs([x, x]) != hash_strs([x])
    assert hash_strs([y, x]) == sha(",".join(sorted([x, y])))


def test_invert_list():
    assert invert_list(["a", "b", "c"]) == {"a": 0, "b": 1, "c": 2}
    assert invert_list([]) == {}
    assert invert_list(["b", "a"]) == {"b": 0, "a": 1}
    with pytest.raises(DuplicateElement):
        invert_list(["a", "a"])


def test_canonical_orbits_mapping():
    assert canonical_orbits_mapping({"a": 1, "b": 0}, [{"a"}, {"b"}]) == {"b": 0, "a": 1}
    assert canonical_orbits_mapping({"a": 0, "b": 1, "c": 2}, [{"a", "b", "c"}]) == {"a": 0, "b": 0, "c": 0}
    assert canonical_orbits_mapping({"a": 2, "b": 1, "c": 0}, [{"a", "c"}, {"b"}]) == {"a": 0, "c": 0, "b": 1}


# exact hash

def test_exact_empty_graph():
    report = exact_hash_graph(LabeledDigraph())
    assert report.graph_digest == sha("[],[]")
    assert report.node_hashes == {}


def test_exact_single_node_layout():
    g = LabeledDigraph().add_node("n", 'q"x')
    digest = sha('["q\\"x"],[]')
    report = exact_hash_graph(g)
    assert report.graph_digest == digest
    assert report.node_hashes == {"n": sha("0," + digest)}


def test_exact_triangle():
    report = exact_hash_graph(triangle())
    assert len(set(report.node_hashes.values())) == 1
    # three equal labels and a directed 3-cycle in canonical order
    assert report.graph_digest == sha('["","",""],[(0,1),(1,2),(2,0)]') or \
        report.graph_digest == sha('["","",""],[(0,2),(1,0),(2,1)]')


def test_exact_diamond_differs():
    assert brute_force_check(diamond_shared(), diamond_split()) is False
    assert exact_hash_graph(diamond_shared()).graph_digest != exact_hash_graph(diamond_split()).graph_digest


def test_exact_hash_equal_iff_isomorphic_small():
    rng = random.Random(41)
    for _ in range(300):
        n = rng.randint(1, 5)
        g1 = random_digraph(rng, n, alphabet="xy")
        g2 = random_digraph(rng, n, alphabet="xy") if rng.random() < 0.5 else random_relabel(rng, g1)[0]
        same = exact_hash_graph(g1).graph_digest == exact_hash_graph(g2).graph_digest
        assert same == brute_force_check(g1, g2)


# Merkle hash

def test_single_node_composition():
    g = LabeledDigraph().add_node("n", "x")
    nonrec = sha('"x",' + EMPTY)
    scc_hash = sha("[" + nonrec + "],[]")
    report = hash_graph(g)
    assert report.nonrec_hashes == {"n": nonrec}
    assert report.scc_hashes == {0: scc_hash}
    assert report.node_hashes == {"n": sha("0," + scc_hash)}
    assert report.graph_digest == sha(sha("0," + scc_hash))
    # frozen golden, computed once from the composition above
    assert report.node_hashes["n"] == "2327973f95298cf26f263b26d7fa436899f213201a07c19ce4a164dc1b36c0a3"


def test_leaf_nonrec_hash():
    report = hash_graph(diamond_shared())
    assert report.nonrec_hashes["d"] == sha('"d",' + EMPTY)


def test_chain_composition():
    # a -> b: b is a leaf, a's nonrec hash folds in b's node hash
    g = LabeledDigraph.from_parts({"a": "A", "b": "B"}, [("a", "b")])
    hb = sha("0," + sha("[" + sha('"B",' + EMPTY) + "],[]"))
    ha = sha("0," + sha("[" + sha('"A",' + sha(hb)) + "],[]"))
    report = hash_graph(g)
    assert report.node_hashes == {"a": ha, "b": hb}


def test_self_loop_composition():
    g = LabeledDigraph().add_node("n", "x").add_edge("n", "n")
    scc_hash = sha("[" + sha('"x",' + EMPTY) + "],[(0,0)]")
    assert hash_graph(g).node_hashes["n"] == sha("0," + scc_hash)


def test_duplicate_child_hashes_are_kept():
    # two distinct children with identical hashes count twice
    one = LabeledDigraph.from_parts({"a": "A", "b": "B"}, [("a", "b")])
    two = LabeledDigraph.from_parts({"a": "A", "b1": "B", "b2": "B"}, [("a", "b1"), ("a", "b2")])
    hb = hash_graph(one).node_hashes["b"]
    assert hash_graph(two).nonrec_hashes["a"] == sha('"A",' + sha(hb + "," + hb))
    assert hash_graph(one).node_hashes["a"] != hash_graph(two).node_hashes["a"]


def test_triangle_whole_graph():
    report = hash_graph(triangle("t"))
    scc_hash = report.scc_hashes[0]
    assert set(report.node_hashes.values()) == {sha("0," + scc_hash)}


def test_diamond_collision():
    assert hash_graph(diamond_shared()).node_hashes["a"] == hash_graph(diamond_split()).node_hashes["a"]


def test_orbit_fixing_collision():
    left, right = hash_graph(orbit_fixing_left()), hash_graph(orbit_fixing_right())
    assert left.node_hashes["a"] == right.node_hashes["a"]
    scc_members = ["b1", "b2", "c1", "c2"]
    assert len({left.node_hashes[n] for n in scc_members}) == 2
    assert left.node_hashes["b1"] == left.node_hashes["b2"]
    assert left.node_hashes["c1"] == left.node_hashes["c2"]


def test_hash_scc_is_idempotent_and_recursive():
    g = orbit_fixing_left()
    cond = condensation(g)
    top = cond.scc_of["a"]
    report = hash_scc(g, cond, top)
    assert all(h is not None for h in cond.hashes)
    snapshot = dict(report.node_hashes)
    hash_scc(g, cond, top, report)
    assert report.node_hashes == snapshot
    assert report.node_hashes == hash_graph(g).node_hashes


def test_hash_scc_rejects_foreign_condensation():
    g = orbit_fixing_left()
    cond = condensation(diamond_shared())
    with pytest.raises(InconsistentCondensation):
        hash_scc(g, cond, 0)


def test_empty_graph_plumbing_digest():
    report = hash_graph(LabeledDigraph())
    assert report.node_hashes == {} and report.graph_digest == EMPTY


def test_json_shape():
    obj = hash_graph(triangle()).to_json_obj()
    assert list(obj) == ["graph", "nodes"]
    assert list(obj["nodes"]) == ["p", "q", "r"]


# orbit collapse

def test_collapse_two_vs_three_cycle():
    two, three = cycle(2), cycle(3)
    assert hash_graph(two).node_hashes["n0"] != hash_graph(three).node_hashes["n0"]
    c2, c3 = hash_graph_collapsed(two), hash_graph_collapsed(three)
    assert c2.scc_hashes == c3.scc_hashes
    assert c2.node_hashes["n0"] == c3.node_hashes["n0"]
    assert c2.graph_digest == c3.graph_digest == sha(c2.node_hashes["n0"])
    assert hash_graph(two).graph_digest != hash_graph(three).graph_digest
    nonrec = sha('"page",' + EMPTY)
    assert c2.scc_hashes[0] == sha("[" + nonrec + "],[(0,0)]")


def test_collapse_orbit_fixing_quotient():
    g = orbit_fixing_left()
    report = hash_graph_collapsed(g)
    cond = condensation(g)
    scc = cond.scc_of["b1"]
    nb, nc = report.nonrec_hashes["b1"], report.nonrec_hashes["c1"]
    # quotient: {b} <-> {c}, plus a self-loop on {c}; orbit order follows the canonizer
    candidates = {sha(f"[{nb},{nc}],[(0,1),(1,0),(1,1)]"), sha(f"[{nc},{nb}],[(0,0),(0,1),(1,0)]")}
    assert report.scc_hashes[scc] in candidates


def test_collapse_equals_plain_on_dags():
    rng = random.Random(43)
    for _ in range(100):
        n = rng.randint(0, 8)
        ids = [f"v{i}" for i in range(n)]
        g = LabeledDigraph.from_parts({i: rng.choice("xyz") for i in ids},
                                      [(ids[i], ids[j]) for i in range(n) for j in range(i + 1, n)
                                       if rng.random() < 0.3])
        assert hash_graph(g).node_hashes == hash_graph_collapsed(g).node_hashes


# properties

@pytest.mark.parametrize("hasher", HASHERS, ids=lambda f: f.__name__)
def test_isomorphism_invariance(hasher):
    rng = random.Random(47)
    for _ in range(300):
        g = random_digraph(rng, rng.randint(0, 8))
        h, mapping = random_relabel(rng, g)
        rg, rh = hasher(g), hasher(h)
        assert all(rg.node_hashes[n] == rh.node_hashes[mapping[n]] for n in g.nodes())
        assert rg.graph_digest == rh.graph_digest


@pytest.mark.parametrize("hasher", HASHERS, ids=lambda f: f.__name__)
def test_orbit_consistency(hasher):
    rng = random.Random(53)
    for _ in range(200):
        g = random_digraph(rng, rng.randint(1, 8), alphabet=rng.choice(["x", "xy"]))
        report = hasher(g)
        if hasher is exact_hash_graph:
            groups = orbits(g)
        else:
            # orbits inside an SCC are taken w.r.t. the nonrec hashes, not raw labels
            cond = condensation(g)
            groups = []
            for m in cond.members:
                sub = g.subgraph(m)
                relabeled = LabeledDigraph.from_parts({n: report.nonrec_hashes[n] for n in m}, sub.edges())
                groups.extend(orbits(relabeled))
        for orb in groups:
            assert len({report.node_hashes[n] for n in orb}) == 1


def test_merkle_locality_under_grafting():
    rng = random.Random(59)
    for _ in range(100):
        g = random_digraph(rng, rng.randint(1, 7))
        before = hash_graph(g).node_hashes
        graft = random_digraph(rng, rng.randint(1, 5), prefix="g")
        h = LabeledDigraph.from_parts([(n, g.label(n)) for n in g] + [(n, graft.label(n)) for n in graft],
                                      g.edges() + graft.edges())
        # upstream edges only: graft -> original
        for n in graft.nodes():
            for m in g.nodes():
                if rng.random() < 0.2:
                    h.add_edge(n, m)
        after = hash_graph(h).node_hashes
        assert all(after[n] == before[n] for n in g.nodes())


def test_recursive_consistency():
    rng = random.Random(61)
    checked = 0
    for _ in range(200):
        g = random_digraph(rng, rng.randint(1, 8))
        report = hash_graph(g)
        cond = condensation(g)
        for v in g.nodes():
            if len(cond.members[cond.scc_of[v]]) == 1 and not g.has_edge(v, v):
                sub = g.subgraph(reachable_from(g, v))
                assert hash_graph(sub).node_hashes[v] == report.node_hashes[v]
                checked += 1
    assert checked > 100


@pytest.mark.parametrize("hasher", HASHERS, ids=lambda f: f.__name__)
def test_deterministic(hasher):
    g = orbit_fixing_left()
    assert hasher(g) == hasher(orbit_fixing_left())
    assert hasher(g).to_json_obj() == hasher(g).to_json_obj()


def test_node_identity_never_matters():
    g = LabeledDigraph.from_parts({"zzz": "x", "aaa": "x"}, [("zzz", "aaa")])
    h = LabeledDigraph.from_parts({"aaa": "x", "zzz": "x"}, [("aaa", "zzz")])
    assert hash_graph(g).node_hashes["zzz"] == hash_graph(h).node_hashes["aaa"]
    assert exact_hash_graph(g).graph_digest == exact_hash_graph(h).graph_digest
