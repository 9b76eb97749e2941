"""Increasing flip posets and their consequences: double-root detection,
falling paths and Moebius functions, interval intersections, Cambrian lattices
via the kappa map, and duplicated-word complexes.

The flip poset is the transitive closure of the increasing flip graph; the
graph equals the Hasse diagram of the poset exactly when the complex is
double root free, and in that case both edge labelings are EL-labelings of the
poset with all the usual shellability dividends.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import elgraph
from .coxeter import CoxeterSystem, GenWord, Matrix, Root
from .errors import CapExceededError, IntegrityError
from .greedy import TreeKind, greedy_facet, spanning_tree_direct
from .subword import (
    Facet,
    LabeledFlipGraph,
    SubwordComplex,
    facet_of_positions,
    flip_graph,
    flippable,
    root_configuration,
)

CAMBRIAN_GROUP_CAP = 10**6


class FlipPoset:
    """The flip graph together with its transitive closure and Hasse diagram."""

    def __init__(self, c: SubwordComplex, graph: LabeledFlipGraph | None = None):
        self.complex = c
        self.graph = flip_graph(c) if graph is None else graph
        self.pos_digraph = self.graph.to_elgraph("pos")
        self.neg_digraph = self.graph.to_elgraph("neg")
        self.hasse = elgraph.hasse_of_closure(self.pos_digraph)

    def leq(self, a, b) -> bool:
        return self.pos_digraph.reachable(tuple(a), tuple(b))

    @property
    def hasse_equals_graph(self) -> bool:
        return self.hasse.edge_count == self.pos_digraph.edge_count

    def interval(self, a, b) -> list[tuple[int, ...]]:
        a, b = tuple(a), tuple(b)
        return [
            v
            for v in self.pos_digraph.vertices
            if self.leq(a, v) and self.leq(v, b)
        ]


def build_flip_poset(c: SubwordComplex) -> FlipPoset:
    return FlipPoset(c)


def double_root_report(c: SubwordComplex, poset: FlipPoset | None = None):
    """(is_double_root_free, witness): the witness is (facet positions, i, j)
    for two flippable positions carrying the same root.  Also cross-checks the
    Hasse-diagram characterization on the built graph."""
    poset = FlipPoset(c) if poset is None else poset
    witness = None
    for f in poset.graph.facets:
        by_root: dict[Root, int] = {}
        for i, r, _ in flippable(c, f):
            if r in by_root:
                witness = (f.positions, by_root[r], i)
                break
            by_root[r] = i
        if witness:
            break
    drf = witness is None
    if drf != poset.hasse_equals_graph:
        raise IntegrityError(
            "double-root freeness must match the Hasse-diagram characterization"
        )
    return drf, witness


def falling_data(poset: FlipPoset, a, b):
    """(number of pos-falling paths, number of neg-falling paths, the unique
    falling path when the complex is double root free and one exists)."""
    a, b = tuple(a), tuple(b)
    pos_falling = elgraph.monotone_paths(poset.pos_digraph, a, b, "falling")
    neg_falling = elgraph.monotone_paths(poset.neg_digraph, a, b, "falling")
    if len(pos_falling) != len(neg_falling):
        raise IntegrityError("pos- and neg-falling path counts must agree")
    unique = None
    drf, _ = double_root_report(poset.complex, poset)
    if drf:
        if len(pos_falling) > 1:
            raise IntegrityError("double root free complex with two falling paths")
        if pos_falling:
            unique = pos_falling[0]
            expected = len(set(a) - set(b))
            if unique.length != expected:
                raise IntegrityError("falling path length must be |I \\ J|")
    return len(pos_falling), len(neg_falling), unique


def mobius_interval(poset: FlipPoset, a, b) -> int:
    """Moebius function of the flip poset: falling-path formula when the
    complex is double root free, otherwise the recursive oracle."""
    a, b = tuple(a), tuple(b)
    drf, _ = double_root_report(poset.complex, poset)
    if not drf:
        return elgraph.mobius(poset.pos_digraph, a, b, "recursive")
    if a == b:
        return 1
    if not poset.leq(a, b):
        return 0
    npos, _, _ = falling_data(poset, a, b)
    return (-1) ** len(set(b) - set(a)) if npos else 0


@dataclass
class IntersectionReport:
    pairs_checked: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def interval_intersection_check(poset: FlipPoset) -> IntersectionReport:
    """For every comparable pair I, J and every facet K in [I, J], check that
    the intersection of I and J is contained in K.  Double root free complexes
    must pass; complexes with double roots can violate it."""
    verts = poset.pos_digraph.vertices
    report = IntersectionReport(0)
    for a in verts:
        for b in verts:
            if not poset.leq(a, b):
                continue
            report.pairs_checked += 1
            common = set(a) & set(b)
            for k in poset.interval(a, b):
                if not common <= set(k):
                    report.violations.append((a, b, k, tuple(sorted(common - set(k)))))
    return report


def path_length_extremes(poset: FlipPoset, a, b) -> tuple[int, int, int, int | None]:
    """(max path length, min path length, rising length, falling length or
    None) between two comparable facets of a double root free complex; the
    rising path is the longest path and the falling one, if any, the shortest."""
    drf, _ = double_root_report(poset.complex, poset)
    if not drf:
        raise ValueError("path length extremes require a double root free complex")
    a, b = tuple(a), tuple(b)
    if not poset.leq(a, b):
        raise ValueError("facets are not comparable")
    paths = elgraph.all_paths(poset.pos_digraph, a, b)
    lengths = [p.length for p in paths]
    rising = elgraph.monotone_paths(poset.pos_digraph, a, b, "rising")
    if len(rising) != 1:
        raise IntegrityError("comparable pair without a unique rising path")
    falling = elgraph.monotone_paths(poset.pos_digraph, a, b, "falling")
    falling_len = falling[0].length if falling else None
    mx, mn = max(lengths), min(lengths)
    if rising[0].length != mx:
        raise IntegrityError("rising path is not a maximum length path")
    if falling_len is not None and falling_len != mn:
        raise IntegrityError("falling path is not a minimum length path")
    return mx, mn, rising[0].length, falling_len


# -- Cambrian lattices ---------------------------------------------------------


def cambrian_complex(system: CoxeterSystem, c_word) -> SubwordComplex:
    """The subword complex on c w_o(c) with target the longest element."""
    c_word = tuple(c_word)
    wo_word = system.longest_element_word()
    wo = system.element_of_word(wo_word)
    sorting = system.sorting_word(wo, c_word)
    return SubwordComplex(system, c_word + sorting, wo_word)


def kappa(c: SubwordComplex, w: Matrix) -> Facet:
    """The unique facet whose root configuration lies in w(Phi+); scans the
    facets.  Raises IntegrityError when zero or several match."""
    sys = c.system
    image = frozenset(sys.apply(w, beta) for beta in sys.positive_roots)
    graph = flip_graph(c)
    matches = [
        f
        for f in graph.facets
        if all(r in image for r in root_configuration(c, f))
    ]
    if len(matches) != 1:
        raise IntegrityError(
            f"kappa must match exactly one facet, found {len(matches)}"
        )
    return matches[0]


@dataclass
class CambrianData:
    """A Cambrian lattice: the c-sortable elements under weak order, with the
    first-missed-position edge labels and the sorting tree."""

    system: CoxeterSystem
    c_word: GenWord
    sortables: list[Matrix]
    covers: list[tuple[int, int, int]]  # (lower index, upper index, label)
    sorting_tree: dict[int, int]  # child index -> parent index
    sorting_words: list[GenWord]
    sorting_positions: list[tuple[int, ...]]
    inversion_sets: list[frozenset]

    def leq(self, i: int, j: int) -> bool:
        return self.inversion_sets[i] <= self.inversion_sets[j]

    def index_of(self, w: Matrix) -> int:
        return self._index[w]

    def __post_init__(self):
        self._index = {w: i for i, w in enumerate(self.sortables)}

    def hasse_digraph(self) -> elgraph.LabeledDigraph:
        """The KM-labeled Hasse diagram as a generic labeled digraph."""
        g = elgraph.LabeledDigraph(vertices=range(len(self.sortables)))
        for lo, hi, label in self.covers:
            g.add_edge(lo, hi, label)
        return g

    def is_lattice(self) -> bool:
        n = len(self.sortables)
        for i in range(n):
            for j in range(i + 1, n):
                ups = [k for k in range(n) if self.leq(i, k) and self.leq(j, k)]
                if len([u for u in ups if all(self.leq(u, v) or u == v for v in ups)]) != 1:
                    return False
                downs = [k for k in range(n) if self.leq(k, i) and self.leq(k, j)]
                if len([d for d in downs if all(self.leq(v, d) or d == v for v in downs)]) != 1:
                    return False
        return True


def cambrian(system: CoxeterSystem, c_word) -> CambrianData:
    """Enumerate the c-sortable elements and assemble the Cambrian lattice."""
    if system.order > CAMBRIAN_GROUP_CAP:
        raise CapExceededError(
            f"group order {system.order} exceeds the Cambrian cap {CAMBRIAN_GROUP_CAP}"
        )
    c_word = tuple(c_word)
    sortables = [w for w in system.group_elements() if system.is_sortable(w, c_word)]
    sortables.sort(key=lambda w: (system.length(w), system.sorting_positions(w, c_word)))
    invs = [system.inversions(w) for w in sortables]
    positions = [system.sorting_positions(w, c_word) for w in sortables]
    words = [system.sorting_word(w, c_word) for w in sortables]
    n = len(sortables)
    leq = [[invs[i] <= invs[j] for j in range(n)] for i in range(n)]
    covers = []
    for i in range(n):
        for j in range(n):
            if i == j or not leq[i][j]:
                continue
            if any(k != i and k != j and leq[i][k] and leq[k][j] for k in range(n)):
                continue
            missed = set(positions[j]) - set(positions[i])
            if not missed:
                raise IntegrityError("cover with no new sorting position")
            covers.append((i, j, min(missed)))
    index = {w: i for i, w in enumerate(sortables)}
    tree = {}
    for i, word in enumerate(words):
        if not word:
            continue
        parent = system.element_of_word(word[:-1])
        if parent not in index:
            raise IntegrityError("sorting-word prefix is not sortable")
        tree[i] = index[parent]
    return CambrianData(system, c_word, sortables, covers, tree, words, positions, invs)


@dataclass
class CambrianIsomorphismReport:
    cambrian: CambrianData
    complex: SubwordComplex
    facet_to_sortable: dict[tuple[int, ...], Matrix]
    is_bijection: bool
    is_isomorphism: bool
    fiber_minima_are_sortables: bool
    source_tree_edges: frozenset
    sorting_tree_edges: frozenset

    @property
    def ok(self) -> bool:
        return self.is_bijection and self.is_isomorphism and self.fiber_minima_are_sortables

    @property
    def trees_equal(self) -> bool:
        return self.source_tree_edges == self.sorting_tree_edges


def verify_cambrian_isomorphism(system: CoxeterSystem, c_word) -> CambrianIsomorphismReport:
    """Check that facet -> weak-order-minimal element of its kappa fiber is a
    poset isomorphism from the flip poset onto the Cambrian lattice, and
    compare the positive source tree with the sorting tree through it."""
    data = cambrian(system, c_word)
    comp = cambrian_complex(system, data.c_word)
    graph = flip_graph(comp)
    configs = {f.positions: frozenset(root_configuration(comp, f)) for f in graph.facets}
    fibers: dict[tuple[int, ...], list[Matrix]] = {f.positions: [] for f in graph.facets}
    for w in system.group_elements():
        image = frozenset(system.apply(w, beta) for beta in system.positive_roots)
        matches = [pos for pos, cfg in configs.items() if cfg <= image]
        if len(matches) != 1:
            raise IntegrityError(f"kappa fiber scan matched {len(matches)} facets")
        fibers[matches[0]].append(w)
    facet_to_sortable = {}
    minima_ok = True
    inv_cache = {w: system.inversions(w) for ws in fibers.values() for w in ws}
    for pos, ws in fibers.items():
        minima = [u for u in ws if all(inv_cache[u] <= inv_cache[v] for v in ws)]
        if len(minima) != 1:
            raise IntegrityError("kappa fiber without a unique weak-order minimum")
        facet_to_sortable[pos] = minima[0]
        if not system.is_sortable(minima[0], data.c_word):
            minima_ok = False
    bijection = (
        len(set(facet_to_sortable.values())) == len(graph.facets)
        and set(facet_to_sortable.values()) == set(data.sortables)
    )
    digraph = graph.to_elgraph("pos")
    iso = True
    verts = [f.positions for f in graph.facets]
    for a in verts:
        for b in verts:
            flips_leq = a == b or digraph.reachable(a, b)
            weak_leq = inv_cache[facet_to_sortable[a]] <= inv_cache[facet_to_sortable[b]]
            if flips_leq != weak_leq:
                iso = False
    source_tree = spanning_tree_direct(comp, TreeKind.POS_SOURCE, graph)
    src_edges = frozenset(
        (facet_to_sortable[parent], facet_to_sortable[child])
        for child, (parent, _, _) in source_tree.parent.items()
    )
    sort_edges = frozenset(
        (data.sortables[pi], data.sortables[ci]) for ci, pi in data.sorting_tree.items()
    )
    return CambrianIsomorphismReport(
        data, comp, facet_to_sortable, bijection, iso, minima_ok, src_edges, sort_edges
    )


# -- duplicated words ----------------------------------------------------------


def duplication_map(length: int, X) -> dict[int, int]:
    """Map k -> new position of the k-th original letter once the letters at
    positions in X have been duplicated."""
    X = set(X)
    return {k: k + len([x for x in X if x < k]) for k in range(1, length + 1)}


def duplicated_complex(system: CoxeterSystem, rho_word, X) -> SubwordComplex:
    """The complex of the word obtained from a reduced word by duplicating the
    letters at positions in X; its facets pick one copy from each pair."""
    rho_word = tuple(rho_word)
    w = system.element_of_word(rho_word)
    if system.length(w) != len(rho_word):
        raise ValueError("the base word must be reduced")
    X = sorted(set(X))
    if any(not 1 <= x <= len(rho_word) for x in X):
        raise ValueError("duplicated positions out of range")
    bullet = duplication_map(len(rho_word), X)
    dup = []
    for k, q in enumerate(rho_word, start=1):
        dup.append(q)
        if k in set(X):
            dup.append(q)
    assert all(dup[bullet[k] - 1] == rho_word[k - 1] for k in bullet)
    return SubwordComplex(system, dup, rho_word)
