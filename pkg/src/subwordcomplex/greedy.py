"""Greedy facets and the four canonical spanning trees of the flip graph.

The positive greedy facet P is the unique source of the increasing flip graph
and its lexicographically smallest facet; the negative greedy facet N is the
unique sink and lexicographically largest.  Each is computable three ways
(absorption sweep, the opposite-direction greedy recursion, or directly off
the flip graph), and the four trees admit father rules and, for two of them,
inductive constructions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .coxeter import Matrix, negate
from .errors import IntegrityError
from .subword import (
    Facet,
    LabeledFlipGraph,
    SubwordComplex,
    facet_of_positions,
    flip,
    flip_graph,
    flippable,
)
from . import elgraph


class TreeKind(enum.Enum):
    POS_SOURCE = "pos-source"
    POS_SINK = "pos-sink"
    NEG_SOURCE = "neg-source"
    NEG_SINK = "neg-sink"

    @property
    def rooted_at_positive(self) -> bool:
        return self in (TreeKind.POS_SOURCE, TreeKind.NEG_SOURCE)

    @property
    def labeling(self) -> str:
        return "pos" if self in (TreeKind.POS_SOURCE, TreeKind.POS_SINK) else "neg"


@dataclass
class SpanningTreeResult:
    kind: TreeKind
    root: tuple[int, ...]
    # child positions -> (parent positions, pos label, neg label) of the edge
    parent: dict[tuple[int, ...], tuple[tuple[int, ...], int, int]] = field(default_factory=dict)

    def edge_set(self) -> frozenset[tuple[tuple[int, ...], tuple[int, ...]]]:
        """Edges in flip-graph orientation (increasing flips)."""
        out = set()
        for child, (par, _, _) in self.parent.items():
            if self.kind.rooted_at_positive:
                out.add((par, child))
            else:
                out.add((child, par))
        return frozenset(out)

    def vertices(self) -> set[tuple[int, ...]]:
        verts = set(self.parent)
        verts.add(self.root)
        verts.update(par for par, _, _ in self.parent.values())
        return verts


def _sweep_positive(c: SubwordComplex) -> tuple[int, ...]:
    """Right-to-left sweep placing inversions as soon as possible; the
    positions not absorbed form the positive greedy facet."""
    sys = c.system
    v = c.rho
    absorbed = set()
    for k in range(c.m, 0, -1):
        q = c.Q[k - 1]
        if v != sys.identity and sys.right_descent(v, q):
            v = sys.right_mul(v, q)
            absorbed.add(k)
    if v != sys.identity:
        raise IntegrityError("sweep failed on a validated complex")
    return tuple(k for k in range(1, c.m + 1) if k not in absorbed)


def _sweep_negative(c: SubwordComplex) -> tuple[int, ...]:
    """Left-to-right sweep placing inversions as soon as possible on the left
    of the target; runs on the inverse so all tests are right descents."""
    sys = c.system
    u = sys.inverse(c.rho)
    absorbed = set()
    for k in range(1, c.m + 1):
        q = c.Q[k - 1]
        if u != sys.identity and sys.right_descent(u, q):
            u = sys.right_mul(u, q)
            absorbed.add(k)
    if u != sys.identity:
        raise IntegrityError("sweep failed on a validated complex")
    return tuple(k for k in range(1, c.m + 1) if k not in absorbed)


def _recursion_positive(c: SubwordComplex) -> tuple[int, ...]:
    """Left-to-right greedy recursion: keep a position (placing a
    non-inversion) whenever the remaining suffix still represents the target."""
    sys = c.system
    v = c.rho
    out = []
    for k in range(1, c.m + 1):
        if _word_contains(c, range(k + 1, c.m + 1), v):
            out.append(k)
        else:
            v = sys.left_mul(c.Q[k - 1], v)
    if v != sys.identity:
        raise IntegrityError("greedy recursion failed on a validated complex")
    return tuple(out)


def _recursion_negative(c: SubwordComplex) -> tuple[int, ...]:
    """Right-to-left greedy recursion, mirror of the positive one."""
    sys = c.system
    v = c.rho
    out = []
    for k in range(c.m, 0, -1):
        if _word_contains(c, range(1, k), v):
            out.append(k)
        else:
            v = sys.right_mul(v, c.Q[k - 1])
    if v != sys.identity:
        raise IntegrityError("greedy recursion failed on a validated complex")
    return tuple(reversed(out))


def _word_contains(c: SubwordComplex, positions, target: Matrix) -> bool:
    """Right-to-left absorption test over an arbitrary position range."""
    sys = c.system
    v = target
    for k in reversed(tuple(positions)):
        if v == sys.identity:
            return True
        if sys.right_descent(v, c.Q[k - 1]):
            v = sys.right_mul(v, c.Q[k - 1])
    return v == sys.identity


def greedy_facet(c: SubwordComplex, sign: str, method: str = "sweep") -> Facet:
    """The positive or negative greedy facet, by one of three constructions.

    method="sweep" places inversions as soon as possible scanning toward the
    relevant end; method="recursion" uses the opposite-direction greedy
    characterization; method="graph" reads the source or sink off the full
    flip graph (the expensive oracle).
    """
    if sign not in ("positive", "negative"):
        raise ValueError("sign must be 'positive' or 'negative'")
    if method == "sweep":
        pos = _sweep_positive(c) if sign == "positive" else _sweep_negative(c)
    elif method == "recursion":
        pos = _recursion_positive(c) if sign == "positive" else _recursion_negative(c)
    elif method == "graph":
        g = flip_graph(c)
        pos = (g.source if sign == "positive" else g.sink).positions
    else:
        raise ValueError("method must be 'sweep', 'recursion' or 'graph'")
    return facet_of_positions(c, pos)


@dataclass
class GreedyFlipReport:
    """Outcome of the greedy-facet deletion checks at both ends of the word."""

    negative_applicable: bool
    negative_ok: bool | None
    positive_applicable: bool
    positive_ok: bool | None

    @property
    def all_ok(self) -> bool:
        return self.negative_ok is not False and self.positive_ok is not False


def greedy_flip_property(c: SubwordComplex) -> GreedyFlipReport:
    """Check that flipping the last position of N (resp. first of P) matches
    the greedy facet of the complex with that letter deleted."""
    sys = c.system
    n_facet = greedy_facet(c, "negative")
    neg_applicable = c.m in set(n_facet.positions) and any(
        i == c.m for i, _, _ in flippable(c, n_facet)
    )
    neg_ok = None
    if neg_applicable:
        flipped, _, _ = flip(c, n_facet, c.m)
        sub = SubwordComplex(
            sys, c.Q[:-1], sys.reduced_word(sys.right_mul(c.rho, c.Q[-1]))
        )
        expected = greedy_facet(sub, "negative")
        neg_ok = flipped.positions == expected.positions

    p_facet = greedy_facet(c, "positive")
    pos_applicable = 1 in set(p_facet.positions) and any(
        i == 1 for i, _, _ in flippable(c, p_facet)
    )
    pos_ok = None
    if pos_applicable:
        flipped, _, _ = flip(c, p_facet, 1)
        shifted = tuple(p - 1 for p in flipped.positions)
        sub = SubwordComplex(
            sys, c.Q[1:], sys.reduced_word(sys.left_mul(c.Q[0], c.rho))
        )
        expected = greedy_facet(sub, "positive")
        pos_ok = shifted == expected.positions
    return GreedyFlipReport(neg_applicable, neg_ok, pos_applicable, pos_ok)


def father(c: SubwordComplex, facet: Facet, kind: TreeKind):
    """Father of a facet in one of the four canonical trees.

    Returns (father facet, pos label, neg label) of the connecting flip-graph
    edge, or None when the facet is the root of that tree.
    """
    if kind is TreeKind.POS_SINK:
        n_pos = set(greedy_facet(c, "negative").positions)
        outside = [i for i in facet.positions if i not in n_pos]
        if not outside:
            return None
        i = min(outside)
        g, j, sign = flip(c, facet, i)
        if sign != +1:
            raise IntegrityError("positive sink father flip must be increasing")
        return g, i, j
    if kind is TreeKind.NEG_SOURCE:
        p_pos = set(greedy_facet(c, "positive").positions)
        outside = [i for i in facet.positions if i not in p_pos]
        if not outside:
            return None
        x = max(outside)
        g, j, sign = flip(c, facet, x)
        if sign != -1:
            raise IntegrityError("negative source father flip must be decreasing")
        return g, j, x
    if kind is TreeKind.NEG_SINK:
        return _father_neg_sink(c, facet)
    if kind is TreeKind.POS_SOURCE:
        return _father_pos_source(c, facet)
    raise ValueError(f"unknown tree kind {kind!r}")


def _father_neg_sink(c: SubwordComplex, facet: Facet):
    """Greedy-prefix father rule: find the first prefix where the facet stops
    agreeing with the prefix's negative greedy facet, then flip the earliest
    position carrying that root."""
    sys = c.system
    inside = set(facet.positions)
    u = sys.identity  # product of the complement letters within the prefix
    uinv = sys.identity
    y = None
    prefix_facet: list[int] = []
    for k in range(1, c.m + 1):
        if k in inside:
            prefix_facet.append(k)
        else:
            u = sys.right_mul(u, c.Q[k - 1])
            uinv = sys.left_mul(c.Q[k - 1], uinv)
        if tuple(prefix_facet) != _prefix_negative_greedy(c, k, uinv):
            y = k
            break
    if y is None:
        return None  # the facet is N itself
    target = facet.roots[y - 1]
    x = next((i for i in facet.positions if facet.roots[i - 1] == target), None)
    if x is None:
        raise IntegrityError("negative sink father: no facet position carries the root")
    g, j, sign = flip(c, facet, x)
    if sign != +1 or j != y:
        raise IntegrityError("negative sink father flip inconsistent with the rule")
    return g, x, j


def _prefix_negative_greedy(c: SubwordComplex, k: int, target_inv: Matrix) -> tuple[int, ...]:
    """N(q_1 .. q_k, target) via the left-to-right sweep, given the inverse of
    the target element."""
    sys = c.system
    u = target_inv
    absorbed = set()
    for pos in range(1, k + 1):
        q = c.Q[pos - 1]
        if u != sys.identity and sys.right_descent(u, q):
            u = sys.right_mul(u, q)
            absorbed.add(pos)
    if u != sys.identity:
        raise IntegrityError("prefix sweep failed: complement word is not reduced")
    return tuple(p for p in range(1, k + 1) if p not in absorbed)


def _father_pos_source(c: SubwordComplex, facet: Facet):
    """Greedy-suffix father rule, mirror of the negative sink one."""
    sys = c.system
    inside = set(facet.positions)
    u = sys.identity  # product of the complement letters within the suffix
    y = None
    suffix_facet: list[int] = []
    for k in range(c.m, 0, -1):
        if k in inside:
            suffix_facet.append(k)
        else:
            u = sys.left_mul(c.Q[k - 1], u)
        shifted = tuple(i - k + 1 for i in reversed(suffix_facet))
        if shifted != _suffix_positive_greedy(c, k, u):
            y = k
            break
    if y is None:
        return None  # the facet is P itself
    target = negate(facet.roots[y - 1])
    x = next(
        (i for i in reversed(facet.positions) if facet.roots[i - 1] == target), None
    )
    if x is None:
        raise IntegrityError("positive source father: no facet position carries the root")
    g, j, sign = flip(c, facet, x)
    if sign != -1 or j != y:
        raise IntegrityError("positive source father flip inconsistent with the rule")
    return g, j, x


def _suffix_positive_greedy(c: SubwordComplex, start: int, target: Matrix) -> tuple[int, ...]:
    """P(q_start .. q_m, target) via the right-to-left sweep, positions
    shifted to start at 1."""
    sys = c.system
    v = target
    absorbed = set()
    for pos in range(c.m, start - 1, -1):
        q = c.Q[pos - 1]
        if v != sys.identity and sys.right_descent(v, q):
            v = sys.right_mul(v, q)
            absorbed.add(pos)
    if v != sys.identity:
        raise IntegrityError("suffix sweep failed: complement word is not reduced")
    return tuple(p - start + 1 for p in range(start, c.m + 1) if p not in absorbed)


def spanning_tree_direct(c: SubwordComplex, kind: TreeKind, graph: LabeledFlipGraph | None = None) -> SpanningTreeResult:
    """The tree as the union of rising paths in the labeled flip graph."""
    g = flip_graph(c) if graph is None else graph
    dg = g.to_elgraph(kind.labeling)
    root = g.source.positions if kind.rooted_at_positive else g.sink.positions
    elkind = "source" if kind.rooted_at_positive else "sink"
    parent_keys = elgraph.spanning_tree(dg, root, elkind)
    labels = {}
    for e in g.edges:
        a = g.facets[e.source].positions
        b = g.facets[e.target].positions
        labels[(a, b)] = (e.pos_label, e.neg_label)
    result = SpanningTreeResult(kind, root)
    for child, par in parent_keys.items():
        edge = (par, child) if kind.rooted_at_positive else (child, par)
        lp, ln = labels[edge]
        result.parent[child] = (par, lp, ln)
    return result


def tree_from_fathers(c: SubwordComplex, kind: TreeKind, graph: LabeledFlipGraph | None = None) -> SpanningTreeResult:
    """The tree assembled by applying the father rule to every facet."""
    g = flip_graph(c) if graph is None else graph
    root = None
    parents = {}
    for f in g.facets:
        got = father(c, f, kind)
        if got is None:
            if root is not None:
                raise IntegrityError("two roots found by the father rule")
            root = f.positions
        else:
            par, lp, ln = got
            parents[f.positions] = (par.positions, lp, ln)
    if root is None:
        raise IntegrityError("no root found by the father rule")
    res = SpanningTreeResult(kind, root)
    res.parent = parents
    return res


def spanning_tree_inductive(c: SubwordComplex, kind: TreeKind) -> SpanningTreeResult:
    """Inductive construction; only the negative sink and positive source
    trees admit one (the other two have no such description)."""
    if kind is TreeKind.NEG_SINK:
        verts, edges, root = _inductive_neg_sink(c, c.m, c.rho)
    elif kind is TreeKind.POS_SOURCE:
        verts, edges, root = _inductive_pos_source(c, 1, c.rho, c.system.inverse(c.rho))
    else:
        raise ValueError("inductive construction exists only for neg-sink and pos-source")
    result = SpanningTreeResult(kind, root)
    for child, par in edges:
        # Labels of the connecting edge, read off the two facets directly.
        if kind is TreeKind.NEG_SINK:
            lp = next(iter(set(child) - set(par)))
            ln = next(iter(set(par) - set(child)))
        else:
            lp = next(iter(set(par) - set(child)))
            ln = next(iter(set(child) - set(par)))
        result.parent[child] = (par, lp, ln)
    return result


def _inductive_neg_sink(c: SubwordComplex, k: int, v: Matrix):
    """Returns (vertices, child->parent edges, negative greedy facet) of the
    negative sink tree of (q_1 .. q_k, v)."""
    sys = c.system
    if k == 0:
        if v != sys.identity:
            raise IntegrityError("empty word with non-identity target")
        return [()], [], ()
    q = c.Q[k - 1]
    if not sys.right_descent(v, q):
        verts, edges, n_sub = _inductive_neg_sink(c, k - 1, v)
        verts = [f + (k,) for f in verts]
        edges = [(a + (k,), b + (k,)) for a, b in edges]
        return verts, edges, n_sub + (k,)
    vq = sys.right_mul(v, q)
    if not c._contains_reduced(k - 1, v):
        return _inductive_neg_sink(c, k - 1, vq)
    va, ea, na = _inductive_neg_sink(c, k - 1, vq)
    vb, eb, nb = _inductive_neg_sink(c, k - 1, v)
    verts = va + [f + (k,) for f in vb]
    edges = ea + [(a + (k,), b + (k,)) for a, b in eb]
    root = nb + (k,)
    edges.append((na, root))
    return verts, edges, root


def _inductive_pos_source(c: SubwordComplex, k: int, v: Matrix, vinv: Matrix):
    """Returns (vertices, child->parent edges, positive greedy facet) of the
    positive source tree of (q_k .. q_m, v), with absolute positions."""
    sys = c.system
    if k > c.m:
        if v != sys.identity:
            raise IntegrityError("empty word with non-identity target")
        return [()], [], ()
    q = c.Q[k - 1]
    if not sys.right_descent(vinv, q):
        verts, edges, p_sub = _inductive_pos_source(c, k + 1, v, vinv)
        verts = [(k,) + f for f in verts]
        edges = [((k,) + a, (k,) + b) for a, b in edges]
        return verts, edges, (k,) + p_sub
    qv = sys.left_mul(q, v)
    qvinv = sys.right_mul(vinv, q)
    from .subword import _suffix_contains

    if not _suffix_contains(c, k + 1, v):
        return _inductive_pos_source(c, k + 1, qv, qvinv)
    va, ea, pa = _inductive_pos_source(c, k + 1, qv, qvinv)
    vb, eb, pb = _inductive_pos_source(c, k + 1, v, vinv)
    verts = va + [(k,) + f for f in vb]
    edges = ea + [((k,) + a, (k,) + b) for a, b in eb]
    root = (k,) + pb
    edges.append((pa, root))
    return verts, edges, root


def spherical_falling_sweep(c: SubwordComplex) -> tuple[list[Facet], list[int]]:
    """From P, flip its positions in decreasing order; in a spherical complex
    this is a falling path ending at N.  Returns (facets, flipped positions)."""
    from .subword import is_spherical

    if not is_spherical(c):
        raise ValueError("falling sweep requires a spherical complex")
    current = greedy_facet(c, "positive")
    path = [current]
    labels = []
    for i in sorted(current.positions, reverse=True):
        current, _, _ = flip(c, current, i)
        path.append(current)
        labels.append(i)
    n_facet = greedy_facet(c, "negative")
    if path[-1].positions != n_facet.positions:
        raise IntegrityError("falling sweep did not end at the negative greedy facet")
    return path, labels
