"""Subword complexes: facets, root functions, flips, labeled flip graphs,
reversal, sphericity and parabolic restriction.

A subword complex is given by a word Q on the generators of a Coxeter system
and a target element rho; its facets are the complements of the reduced
expressions of rho embedded in Q.  Positions in Q are 1-based.  Every facet
carries its full root-function array, which is updated in O((j-i) n) per flip;
set ``FLIP_SELF_CHECK = True`` to recompute the array from scratch after every
flip and compare (slow, used by the test suite).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

from .coxeter import CoxeterSystem, GenWord, Matrix, Root, negate, root_is_positive
from .errors import CapExceededError, IntegrityError, NotRepresentableError
from .elgraph import LabeledDigraph

DEFAULT_FACET_CAP = 10**6
FLIP_SELF_CHECK = False


def facet_cap() -> int:
    value = os.environ.get("SUBWORD_FACET_CAP")
    return int(value) if value else DEFAULT_FACET_CAP


class SubwordComplex:
    """The subword complex of a word Q and a target element rho.

    ``rho_word`` may be any word for rho, reduced or not; the stored
    ``rho_word`` is a canonical reduced word.  Construction fails with
    NotRepresentableError when Q does not contain a reduced expression of rho.
    """

    def __init__(self, system: CoxeterSystem, Q, rho_word):
        self.system = system
        self.Q: GenWord = tuple(Q)
        for q in self.Q:
            if not 1 <= q <= system.rank:
                raise ValueError(f"letter {q} out of range 1..{system.rank}")
        self.m = len(self.Q)
        self.rho: Matrix = system.element_of_word(rho_word)
        self.rho_word: GenWord = system.reduced_word(self.rho)
        self.rho_length = len(self.rho_word)
        self.rho_inversions = system.inversions(self.rho)
        self.facet_size = self.m - self.rho_length
        if not self._contains_reduced(self.m):
            raise NotRepresentableError(
                f"the word does not contain a reduced expression of the target "
                f"(length {self.rho_length})"
            )

    def __repr__(self) -> str:
        return (
            f"SubwordComplex({self.system.type_name}, Q={','.join(map(str, self.Q))}, "
            f"rho={','.join(map(str, self.rho_word))})"
        )

    def _contains_reduced(self, k: int, target: Matrix | None = None) -> bool:
        """Right-to-left absorption sweep: does q_1..q_k contain a reduced
        expression of the target (rho by default)?"""
        sys = self.system
        v = self.rho if target is None else target
        for pos in range(k, 0, -1):
            if v is sys.identity or v == sys.identity:
                return True
            if sys.right_descent(v, self.Q[pos - 1]):
                v = sys.right_mul(v, self.Q[pos - 1])
        return v == sys.identity

    def prefix_product(self, positions) -> Matrix:
        """Product of the letters of Q at the given positions, in word order."""
        sys = self.system
        w = sys.identity
        for k in sorted(positions):
            w = sys.right_mul(w, self.Q[k - 1])
        return w


# Alias matching the operation name used throughout the docs.
def make_complex(system: CoxeterSystem, Q, rho_word) -> SubwordComplex:
    return SubwordComplex(system, Q, rho_word)


@dataclass(frozen=True)
class Facet:
    """A facet: sorted 1-based positions plus the full root-function array."""

    positions: tuple[int, ...]
    roots: tuple[Root, ...]

    def __contains__(self, k: int) -> bool:
        return k in set(self.positions)

    def root(self, k: int) -> Root:
        return self.roots[k - 1]

    def complement(self, m: int) -> tuple[int, ...]:
        inside = set(self.positions)
        return tuple(k for k in range(1, m + 1) if k not in inside)


def root_function(c: SubwordComplex, positions, k: int) -> Root:
    """r(I, k) computed from scratch: the prefix of Q outside I applied to the
    k-th simple root.  Oracle form; facets cache the full array."""
    if not 1 <= k <= c.m:
        raise ValueError(f"position {k} out of range 1..{c.m}")
    sys = c.system
    inside = set(positions)
    beta = sys.simple_roots[c.Q[k - 1] - 1]
    for x in range(k - 1, 0, -1):
        if x not in inside:
            beta = sys.apply_generator(c.Q[x - 1], beta)
    return beta


def facet_of_positions(c: SubwordComplex, positions) -> Facet:
    """Build a facet with its root array; validates that the complement is a
    reduced expression of rho."""
    pos = tuple(sorted(positions))
    if len(pos) != c.facet_size or len(set(pos)) != len(pos):
        raise ValueError(f"a facet has exactly {c.facet_size} distinct positions")
    sys = c.system
    inside = set(pos)
    roots = []
    w = sys.identity
    for k in range(1, c.m + 1):
        q = c.Q[k - 1]
        roots.append(tuple(row[q - 1] for row in w))
        if k not in inside:
            if sys.right_descent(w, q) :
                raise ValueError(f"complement of {pos} is not reduced at position {k}")
            w = sys.right_mul(w, q)
    if w != c.rho:
        raise ValueError(f"complement of {pos} is not an expression of the target")
    return Facet(pos, tuple(roots))


def flippable(c: SubwordComplex, facet: Facet) -> list[tuple[int, Root, int]]:
    """Positions of the facet that admit a flip, with their root and sign.

    Sign +1 means the flip is increasing (the root lies in inv(rho)), -1
    decreasing (its negative does).
    """
    inv = c.rho_inversions
    out = []
    for i in facet.positions:
        r = facet.roots[i - 1]
        if r in inv:
            out.append((i, r, +1))
        elif negate(r) in inv:
            out.append((i, r, -1))
    return out


def root_configuration(c: SubwordComplex, facet: Facet) -> tuple[Root, ...]:
    """The multiset R(I) of roots at flippable positions, in position order."""
    return tuple(r for _, r, _ in flippable(c, facet))


def flip(c: SubwordComplex, facet: Facet, i: int) -> tuple[Facet, int, int]:
    """Flip position i of the facet; returns (new facet, partner position j,
    sign).  Sign +1 iff i < j (increasing flip)."""
    if i not in set(facet.positions):
        raise ValueError(f"position {i} is not in the facet")
    sys = c.system
    r = facet.roots[i - 1]
    if r not in c.rho_inversions and negate(r) not in c.rho_inversions:
        raise ValueError(f"position {i} is not flippable")
    inside = set(facet.positions)
    neg_r = negate(r)
    j = 0
    for k in range(1, c.m + 1):
        if k not in inside and facet.roots[k - 1] in (r, neg_r):
            j = k
            break
    if j == 0:
        raise IntegrityError("flippable position without a partner in the complement")
    lo, hi = (i, j) if i < j else (j, i)
    new_roots = list(facet.roots)
    n = sys.rank
    sym = sys.sym_form
    phi = tuple(sum(sym[k][l] * r[l] for l in range(n)) for k in range(n))
    den = sum(r[k] * phi[k] for k in range(n))
    for k in range(lo + 1, hi + 1):
        gamma = new_roots[k - 1]
        coef, rem = divmod(2 * sum(gamma[l] * phi[l] for l in range(n)), den)
        if rem:
            raise IntegrityError("non-integral flip coefficient")
        new_roots[k - 1] = tuple(gamma[l] - coef * r[l] for l in range(n))
    new_positions = tuple(sorted(inside - {i} | {j}))
    result = Facet(new_positions, tuple(new_roots))
    if FLIP_SELF_CHECK:
        fresh = facet_of_positions(c, new_positions)
        if fresh.roots != result.roots:
            raise IntegrityError("incremental root update disagrees with recomputation")
    return result, j, (+1 if i < j else -1)


def facets_inductive(c: SubwordComplex, side: str = "right"):
    """Enumerate all facets (as sorted position tuples) by the three-case
    induction on the last letter (side="right") or first letter with shift
    (side="left").  Yields in a deterministic order."""
    if side not in ("right", "left"):
        raise ValueError("side must be 'right' or 'left'")
    sys = c.system
    if side == "right":
        def rec(k: int, v: Matrix):
            if k == 0:
                yield ()
                return
            q = c.Q[k - 1]
            if not sys.right_descent(v, q):
                # The last letter cannot end a reduced expression: k in all facets.
                for f in rec(k - 1, v):
                    yield f + (k,)
            else:
                vq = sys.right_mul(v, q)
                if c._contains_reduced(k - 1, v):
                    for f in rec(k - 1, vq):
                        yield f
                    for f in rec(k - 1, v):
                        yield f + (k,)
                else:
                    yield from rec(k - 1, vq)
        yield from rec(c.m, c.rho)
    else:
        def rec_left(k: int, v: Matrix, vinv: Matrix):
            if k > c.m:
                yield ()
                return
            q = c.Q[k - 1]
            if not sys.right_descent(vinv, q):
                # l(q v) > l(v): the first letter is in every facet.
                for f in rec_left(k + 1, v, vinv):
                    yield (k,) + f
            else:
                qv = sys.left_mul(q, v)
                qvinv = sys.right_mul(vinv, q)
                if _suffix_contains(c, k + 1, v):
                    yield from rec_left(k + 1, qv, qvinv)
                    for f in rec_left(k + 1, v, vinv):
                        yield (k,) + f
                else:
                    yield from rec_left(k + 1, qv, qvinv)
        yield from rec_left(1, c.rho, sys.inverse(c.rho))


def _suffix_contains(c: SubwordComplex, start: int, target: Matrix) -> bool:
    """Does the suffix q_start .. q_m contain a reduced expression of target?"""
    sys = c.system
    v = target
    for pos in range(c.m, start - 1, -1):
        if v == sys.identity:
            return True
        if sys.right_descent(v, c.Q[pos - 1]):
            v = sys.right_mul(v, c.Q[pos - 1])
    return v == sys.identity


@dataclass(frozen=True)
class FlipEdge:
    source: int
    target: int
    pos_label: int
    neg_label: int
    direction: Root


class LabeledFlipGraph:
    """Increasing flip graph with both edge labelings.

    Vertices are facets in lexicographic order of their position sequences;
    each edge carries the position flipped out (pos_label), the position
    flipped in (neg_label) and the direction root.
    """

    def __init__(self, complex_: SubwordComplex, facets, edges):
        self.complex = complex_
        self.facets: tuple[Facet, ...] = tuple(sorted(facets, key=lambda f: f.positions))
        self.index = {f.positions: i for i, f in enumerate(self.facets)}
        self.edges: tuple[FlipEdge, ...] = tuple(
            sorted(edges, key=lambda e: (e.source, e.target))
        )
        indeg = [0] * len(self.facets)
        outdeg = [0] * len(self.facets)
        for e in self.edges:
            if e.pos_label >= e.neg_label:
                raise IntegrityError("non-increasing edge in the flip graph")
            indeg[e.target] += 1
            outdeg[e.source] += 1
        sources = [i for i, d in enumerate(indeg) if d == 0]
        sinks = [i for i, d in enumerate(outdeg) if d == 0]
        if len(self.facets) > 0 and (len(sources) != 1 or len(sinks) != 1):
            raise IntegrityError(
                f"flip graph must have a unique source and sink, got {len(sources)}/{len(sinks)}"
            )
        self.source_index = sources[0] if sources else None
        self.sink_index = sinks[0] if sinks else None
        self.in_degrees = tuple(indeg)
        if not self._connected():
            raise IntegrityError("flip graph is not connected")

    def _connected(self) -> bool:
        n = len(self.facets)
        if n <= 1:
            return True
        adj = [[] for _ in range(n)]
        for e in self.edges:
            adj[e.source].append(e.target)
            adj[e.target].append(e.source)
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == n

    def to_elgraph(self, labeling: str = "pos") -> LabeledDigraph:
        """View as a generic labeled digraph, vertices keyed by positions."""
        if labeling not in ("pos", "neg"):
            raise ValueError("labeling must be 'pos' or 'neg'")
        g = LabeledDigraph(vertices=[f.positions for f in self.facets])
        for e in self.edges:
            label = e.pos_label if labeling == "pos" else e.neg_label
            g.add_edge(self.facets[e.source].positions, self.facets[e.target].positions, label)
        return g

    @property
    def source(self) -> Facet:
        return self.facets[self.source_index]

    @property
    def sink(self) -> Facet:
        return self.facets[self.sink_index]


def flip_graph(c: SubwordComplex, cap: int | None = None) -> LabeledFlipGraph:
    """Build the full increasing flip graph by exploring flips from the
    lexicographically smallest facet."""
    cap = facet_cap() if cap is None else cap
    from .greedy import greedy_facet  # local import to avoid a module cycle

    start = greedy_facet(c, "positive", method="sweep")
    facets: dict[tuple[int, ...], Facet] = {start.positions: start}
    queue = [start]
    edges: list[tuple[tuple, tuple, int, int, Root]] = []
    while queue:
        f = queue.pop()
        for i, r, sign in flippable(c, f):
            if sign < 0:
                continue
            g, j, _ = flip(c, f, i)
            edges.append((f.positions, g.positions, i, j, r))
            if g.positions not in facets:
                facets[g.positions] = g
                if len(facets) > cap:
                    raise CapExceededError(f"facet count exceeds cap {cap}")
                queue.append(g)
    ordered = sorted(facets.values(), key=lambda f: f.positions)
    index = {f.positions: k for k, f in enumerate(ordered)}
    flip_edges = [
        FlipEdge(index[a], index[b], i, j, r) for a, b, i, j, r in edges
    ]
    return LabeledFlipGraph(c, ordered, flip_edges)


def h_vector(g: LabeledFlipGraph) -> tuple[int, ...]:
    """The in-degree sequence of the increasing flip graph: entry d counts the
    facets of in-degree d."""
    top = max(g.in_degrees) if g.in_degrees else 0
    out = [0] * (top + 1)
    for d in g.in_degrees:
        out[d] += 1
    if out[0] != 1:
        raise IntegrityError("h_0 must be 1 (unique source)")
    return tuple(out)


def reverse_complex(c: SubwordComplex) -> tuple[SubwordComplex, dict[int, int]]:
    """The reversed complex on the reversed word and inverted target, plus the
    position map i -> m + 1 - i carrying facets across."""
    sys = c.system
    rev_word = tuple(reversed(c.Q))
    rho_inv_word = tuple(reversed(c.rho_word))
    rev = SubwordComplex(sys, rev_word, rho_inv_word)
    pos_map = {i: c.m + 1 - i for i in range(1, c.m + 1)}
    return rev, pos_map


def is_spherical(c: SubwordComplex) -> bool:
    """Sphericity via the Demazure-product criterion."""
    return c.system.demazure_product(c.Q) == c.rho


# -- restriction to parabolic subgroups ---------------------------------------


def _rref(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    rows = [row[:] for row in rows]
    pivot_col = 0
    rank = 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and pivot_col < ncols:
        pivot = next((r for r in range(rank, len(rows)) if rows[r][pivot_col]), None)
        if pivot is None:
            pivot_col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = Fraction(1, 1) / rows[rank][pivot_col]
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][pivot_col]:
                factor = rows[r][pivot_col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        pivot_col += 1
    return [row for row in rows if any(row)]


def _in_span(basis_rref: list[list[Fraction]], vec) -> bool:
    residue = [Fraction(x) for x in vec]
    for row in basis_rref:
        lead = next(i for i, x in enumerate(row) if x)
        if residue[lead]:
            factor = residue[lead] / row[lead]
            residue = [a - factor * b for a, b in zip(residue, row)]
    return not any(residue)


def _coordinates(basis: list[Root], vec: Root) -> tuple[int, ...]:
    """Integer coordinates of vec in the given basis (exact elimination)."""
    n = len(vec)
    cols = len(basis)
    aug = [[Fraction(basis[j][i]) for j in range(cols)] + [Fraction(vec[i])] for i in range(n)]
    coords = [Fraction(0)] * cols
    row = 0
    pivots = []
    for col in range(cols):
        pivot = next((r for r in range(row, n) if aug[r][col]), None)
        if pivot is None:
            continue
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = Fraction(1, 1) / aug[row][col]
        aug[row] = [x * inv for x in aug[row]]
        for r in range(n):
            if r != row and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
    for r in range(row, n):
        if aug[r][cols]:
            raise ValueError("vector outside the span of the basis")
    for r, col in enumerate(pivots):
        coords[col] = aug[r][cols]
    out = []
    for x in coords:
        if x.denominator != 1:
            raise IntegrityError("non-integral coordinates in the restricted simple basis")
        out.append(int(x))
    return tuple(out)


@dataclass
class Restriction:
    """Result of restricting a complex to the facets reachable from a given
    facet by flips with directions inside a subspace."""

    complex: SubwordComplex
    facet: Facet
    positions: tuple[int, ...]  # the set X of ambient positions kept, in order
    simple_roots: tuple[Root, ...]  # ambient coordinates of the restricted simples

    def ambient_root(self, root: Root) -> Root:
        """Translate a root of the restricted system into ambient coordinates."""
        n = len(self.simple_roots[0])
        out = [0] * n
        for coef, delta in zip(root, self.simple_roots):
            for i in range(n):
                out[i] += coef * delta[i]
        return tuple(out)


def restrict(c: SubwordComplex, facet: Facet, spanning_roots) -> Restriction:
    """Restrict the complex to the span of the given roots around a facet.

    Returns the restricted complex, the facet corresponding to the input
    facet, and the set X of positions whose root lies in the span; the letter
    order of Q is preserved.
    """
    sys = c.system
    span = [tuple(int(x) for x in r) for r in spanning_roots]
    if not span:
        raise ValueError("need at least one spanning root")
    rref = _rref([[Fraction(x) for x in r] for r in span])
    if len(rref) != len(span):
        raise ValueError("spanning roots are linearly dependent")
    sub_pos = [beta for beta in sys.positive_roots if _in_span(rref, beta)]
    if not sub_pos:
        raise ValueError("the span meets no reflection of the ambient system")
    sums = {
        tuple(a + b for a, b in zip(b1, b2))
        for b1 in sub_pos
        for b2 in sub_pos
    }
    simples = [beta for beta in sub_pos if beta not in sums]
    simples.sort(key=lambda r: (next(i for i, x in enumerate(r) if x), r))
    p = len(simples)
    form = sys.sym_form

    def pairing(a: Root, b: Root) -> int:
        return sum(a[i] * form[i][j] * b[j] for i in range(sys.rank) for j in range(sys.rank))

    cartan = [[0] * p for _ in range(p)]
    symmetrizer = []
    for s in range(p):
        dss = pairing(simples[s], simples[s])
        symmetrizer.append(dss)
        for t in range(p):
            num = 2 * pairing(simples[s], simples[t])
            coef, rem = divmod(num, dss)
            if rem:
                raise IntegrityError("restricted Cartan matrix is not integral")
            cartan[s][t] = coef
    sub_sys = CoxeterSystem(cartan, symmetrizer)

    X = [k for k in range(1, c.m + 1) if _in_span(rref, facet.roots[k - 1])]
    inside = set(facet.positions)
    letters: list[int] = []
    new_facet_positions: list[int] = []
    w = sub_sys.identity
    for idx, k in enumerate(X, start=1):
        target = _coordinates(simples, facet.roots[k - 1])
        letter = None
        for j in range(p):
            if tuple(row[j] for row in w) == target:
                letter = j + 1
                break
        if letter is None:
            raise IntegrityError(
                "no restricted letter realizes the root at an ambient position"
            )
        letters.append(letter)
        if k in inside:
            new_facet_positions.append(idx)
        else:
            w = sub_sys.right_mul(w, letter)
    rho_word = tuple(
        letters[idx - 1]
        for idx in range(1, len(X) + 1)
        if idx not in set(new_facet_positions)
    )
    sub_complex = SubwordComplex(sub_sys, letters, rho_word)
    sub_facet = facet_of_positions(sub_complex, new_facet_positions)
    # The restricted inversion set must be the ambient one cut to the span.
    ambient_cut = {
        beta for beta in c.rho_inversions if _in_span(rref, beta)
    }
    mapped = {
        tuple(
            sum(coef * simples[s][i] for s, coef in enumerate(beta))
            for i in range(sys.rank)
        )
        for beta in sub_complex.rho_inversions
    }
    if mapped != ambient_cut:
        raise IntegrityError("restricted inversion set mismatch")
    return Restriction(sub_complex, sub_facet, tuple(X), tuple(simples))
