"""Command-line front end.

Subcommands construct a complex from a type descriptor plus word literals and
emit facet listings, DOT graphs and trees, JSON statistics, ASCII sorting
networks, benchmark reports, Cambrian lattice summaries and duplicated-word
checks.  Positions and generator indices are 1-based everywhere.

Exit codes: 0 success, 2 parse error, 3 word does not represent the target,
4 size cap exceeded, 5 violated structural invariant (a bug trap).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import elgraph, flipstream, posets, subword
from .coxeter import CoxeterSystem, parse_type_spec, parse_word, system_from_spec
from .errors import (
    CapExceededError,
    IntegrityError,
    NotRepresentableError,
    ParseError,
)
from .greedy import TreeKind, greedy_facet, spanning_tree_direct
from .subword import SubwordComplex

EXIT_PARSE = 2
EXIT_NOT_REPRESENTABLE = 3
EXIT_CAP = 4
EXIT_INTEGRITY = 5

EMPTY_FACET = "∅"


def _facet_str(positions) -> str:
    return " ".join(map(str, positions)) if positions else EMPTY_FACET


def parse_facet(text: str) -> tuple[int, ...]:
    cleaned = text.strip().strip("{}").strip()
    if cleaned in ("", EMPTY_FACET):
        return ()
    try:
        return tuple(sorted(int(p) for p in cleaned.replace(",", " ").split()))
    except ValueError as exc:
        raise ParseError(f"cannot parse facet literal {text!r}: {exc}") from None


def _complex_from_args(args) -> SubwordComplex:
    system = system_from_spec(args.type)
    word = parse_word(args.word)
    rho = parse_word(args.rho)
    return SubwordComplex(system, word, rho)


def cmd_facets(args) -> int:
    c = _complex_from_args(args)
    if args.algo == "greedy":
        for facet in flipstream.stream_facets(c):
            print(_facet_str(facet.positions))
    else:
        for positions in subword.facets_inductive(c):
            print(_facet_str(positions))
    return 0


def _dot_graph(graph: subword.LabeledFlipGraph) -> str:
    lines = ["digraph flipgraph {"]
    for facet in graph.facets:
        lines.append(f'  "{_facet_str(facet.positions)}";')
    for e in graph.edges:
        a = _facet_str(graph.facets[e.source].positions)
        b = _facet_str(graph.facets[e.target].positions)
        lines.append(f'  "{a}" -> "{b}" [pos={e.pos_label} neg={e.neg_label}];')
    lines.append("}")
    return "\n".join(lines)


def cmd_graph(args) -> int:
    c = _complex_from_args(args)
    print(_dot_graph(subword.flip_graph(c)))
    return 0


def cmd_tree(args) -> int:
    c = _complex_from_args(args)
    kind = TreeKind(args.kind)
    tree = spanning_tree_direct(c, kind)
    lines = [f"digraph tree_{kind.value.replace('-', '_')} {{"]
    lines.append(f'  "{_facet_str(tree.root)}" [root=true];')
    for v in sorted(tree.vertices()):
        if v != tree.root:
            lines.append(f'  "{_facet_str(v)}";')
    for a, b in sorted(tree.edge_set()):
        child, parent = (b, a) if kind.rooted_at_positive else (a, b)
        _, lp, ln = tree.parent[child]
        lines.append(
            f'  "{_facet_str(a)}" -> "{_facet_str(b)}" [pos={lp} neg={ln}];'
        )
    lines.append("}")
    print("\n".join(lines))
    return 0


def cmd_stats(args) -> int:
    c = _complex_from_args(args)
    graph = subword.flip_graph(c)
    poset = posets.FlipPoset(c, graph)
    drf, _ = posets.double_root_report(c, poset)
    stats = {
        "facet_count": len(graph.facets),
        "h_vector": list(subword.h_vector(graph)),
        "spherical": subword.is_spherical(c),
        "double_root_free": drf,
        "greedy_positive": list(graph.source.positions),
        "greedy_negative": list(graph.sink.positions),
        "mobius_P_N": posets.mobius_interval(
            poset, graph.source.positions, graph.sink.positions
        ),
    }
    print(json.dumps(stats, sort_keys=True))
    return 0


def _one_line_permutation(n_levels: int, swaps) -> list[int]:
    occupants = list(range(1, n_levels + 1))
    for level in swaps:
        occupants[level - 1], occupants[level] = occupants[level], occupants[level - 1]
    return occupants


def cmd_network(args) -> int:
    system = system_from_spec(args.type)
    if any(letter != "A" for letter, _ in parse_type_spec(args.type)):
        raise ParseError("network rendering is available for pure type A only")
    word = parse_word(args.word)
    rho = parse_word(args.rho)
    c = SubwordComplex(system, word, rho)
    facet_positions = None
    if args.facet is not None:
        facet_positions = parse_facet(args.facet)
        subword.facet_of_positions(c, facet_positions)  # validate
    n_levels = system.rank + 1
    width = 4
    inside = set(facet_positions or ())
    rows = {level: [] for level in range(1, n_levels + 1)}
    for k, q in enumerate(word, start=1):
        for level in range(1, n_levels + 1):
            if level in (q, q + 1):
                if facet_positions is None:
                    mark = "|"
                else:
                    mark = "o" if k in inside else "X"
                rows[level].append(f"-{mark}-".center(width, "-"))
            else:
                rows[level].append("-" * width)
    pi = None
    if facet_positions is not None:
        crossings = [word[k - 1] for k in range(1, c.m + 1) if k not in inside]
        pi = _one_line_permutation(n_levels, crossings)
    header = " " * 5 + "".join(str(k % 10).center(width) for k in range(1, c.m + 1))
    print(header)
    for level in range(n_levels, 0, -1):
        right = f"  {pi[level - 1]}" if pi else ""
        print(f"{level:>3}  " + "".join(rows[level]) + right)
    if pi:
        print("pi =", " ".join(map(str, pi)))
        print("crossings =", c.m - len(inside))
    return 0


def cmd_bench(args) -> int:
    c = _complex_from_args(args)
    report = flipstream.benchmark(c, repetitions=args.repetitions)
    print(json.dumps(report, sort_keys=True))
    return 0


def cmd_cambrian(args) -> int:
    system = system_from_spec(args.type)
    cox = parse_word(args.cox)
    data = posets.cambrian(system, cox)
    km_status = elgraph.check_labeling(data.hasse_digraph())
    report = posets.verify_cambrian_isomorphism(system, cox)
    print(f"size = {len(data.sortables)}")
    print(f"lattice = {data.is_lattice()}")
    print(f"km_labeling = {km_status}")
    print(f"isomorphism = {'OK' if report.ok else 'FAILED'}")
    print(f"sorting_tree_equals_source_tree = {report.trees_equal}")
    return 0


def cmd_duplicate(args) -> int:
    system = system_from_spec(args.type)
    rho_word = parse_word(args.rho_word)
    X = parse_facet(args.dup)
    c = posets.duplicated_complex(system, rho_word, X)
    graph = subword.flip_graph(c)
    chi = len(X)
    print(f"facets = {len(graph.facets)}")
    print(f"cube_dimension = {chi}")
    cube_ok = len(graph.facets) == 2**chi and all(
        e.neg_label == e.pos_label + 1 for e in graph.edges
    )
    print(f"cube_labels = {'OK' if cube_ok else 'FAILED'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subwordcx",
        description="Subword complexes on finite Coxeter groups: facets, flips, "
        "flip graphs, spanning trees, posets and Cambrian lattices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_complex_args(p):
        p.add_argument("--type", required=True, help="Coxeter type, e.g. A3 or B2xA1")
        p.add_argument("--word", required=True, help="word Q, e.g. 2,3,1,3,2,1,2,3,1")
        p.add_argument("--rho", required=True, help="word for the target element")

    p = sub.add_parser("facets", help="list all facets, one per line")
    add_complex_args(p)
    p.add_argument("--algo", choices=("greedy", "inductive"), default="greedy")
    p.set_defaults(func=cmd_facets)

    p = sub.add_parser("graph", help="emit the labeled increasing flip graph as DOT")
    add_complex_args(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("tree", help="emit one canonical spanning tree as DOT")
    add_complex_args(p)
    p.add_argument(
        "--kind",
        choices=tuple(k.value for k in TreeKind),
        required=True,
    )
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("stats", help="JSON summary of the complex")
    add_complex_args(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("network", help="ASCII sorting network (type A only)")
    add_complex_args(p)
    p.add_argument("--facet", help="render contacts/crossings of this facet")
    p.set_defaults(func=cmd_network)

    p = sub.add_parser("bench", help="compare greedy flip vs inductive enumeration")
    add_complex_args(p)
    p.add_argument("--repetitions", type=int, default=3)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("cambrian", help="Cambrian lattice summary and checks")
    p.add_argument("--type", required=True)
    p.add_argument("--cox", required=True, help="a reduced word for a Coxeter element")
    p.set_defaults(func=cmd_cambrian)

    p = sub.add_parser("duplicate", help="duplicated-word complex checks")
    p.add_argument("--type", required=True)
    p.add_argument("--rho-word", required=True, dest="rho_word")
    p.add_argument("--dup", required=True, help="positions to duplicate, e.g. '1 3'")
    p.set_defaults(func=cmd_duplicate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotRepresentableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_REPRESENTABLE
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except IntegrityError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    raise SystemExit(main())
