"""``dagmerkle`` command line.

Exit codes: 0 success, 2 malformed input or usage, 3 graph too large for
``verify``.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import canon, graph, merkle, reductions, scc
from .errors import GraphError, TooLarge

VERBS = ("hash", "exact-hash", "scc", "canon", "orbits", "verify", "encode")
KINDS = ("plain", "edge-labeled", "undirected")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def load_graph(path: str, kind: str = "plain") -> graph.LabeledDigraph:
    text = _read(path)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"{path}: bad JSON: {exc}") from None
    if kind == "plain":
        return graph.from_json_obj(obj)
    if kind == "edge-labeled":
        return reductions.encode_edge_labels(reductions.edge_labeled_from_json_obj(obj))
    return reductions.encode_undirected(reductions.undirected_from_json_obj(obj))


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n"


def run(args: argparse.Namespace) -> str:
    """Execute one verb and return the text to print."""
    if args.collapse_orbits and args.verb != "hash":
        raise GraphError("--collapse-orbits only applies to 'hash'")
    if args.verb == "verify":
        if args.file2 is None:
            raise GraphError("verify needs two input files")
    elif args.file2 is not None:
        raise GraphError(f"{args.verb} takes one input file")

    g = load_graph(args.file, args.kind)
    if args.verb == "hash":
        fn = merkle.hash_graph_collapsed if args.collapse_orbits else merkle.hash_graph
        return _dumps(fn(g).to_json_obj())
    if args.verb == "exact-hash":
        return _dumps(merkle.exact_hash_graph(g).to_json_obj())
    if args.verb == "scc":
        return _dumps(sorted(sorted(c) for c in scc.strongly_connected_components(g)))
    if args.verb == "canon":
        form = canon.canonize(g)
        return _dumps({"order": form.order, "orbits": [sorted(o) for o in form.orbits]})
    if args.verb == "orbits":
        return _dumps({"orbits": [sorted(o) for o in canon.orbits(g)]})
    if args.verb == "verify":
        g2 = load_graph(args.file2, args.kind)
        return _dumps({"isomorphic": canon.brute_force_check(g, g2)})
    return graph.dumps(g)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dagmerkle", description="Structural hashing of directed graphs.")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("file", help="graph JSON file, or - for stdin")
    p.add_argument("file2", nargs="?", help="second graph (verify only)")
    p.add_argument("--collapse-orbits", action="store_true",
                   help="quotient each SCC by its orbits before hashing (hash only)")
    p.add_argument("--kind", choices=KINDS, default="plain", help="input graph kind")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = run(args)
    except TooLarge as exc:
        print(f"dagmerkle: {exc}", file=sys.stderr)
        return 3
    except (GraphError, OSError) as exc:
        print(f"dagmerkle: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
