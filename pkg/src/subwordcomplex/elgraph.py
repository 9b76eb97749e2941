"""Finite acyclic edge-labeled digraphs: monotone paths, ER/EL verification,
source and sink trees, Hasse diagrams and Moebius functions.

This module is the generic, desk-scale verification layer: paths are
enumerated exhaustively (with memoized reachability for pruning), and the
recursive Moebius computation serves as the independent oracle for the
falling-path formula.  Labels are positive integers; a rising path has
strictly increasing labels while a falling path has weakly decreasing ones.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import IntegrityError


@dataclass(frozen=True)
class PathRecord:
    """A path through the graph together with its induced label sequence."""

    vertices: tuple
    labels: tuple[int, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.vertices) - 1:
            raise ValueError("label sequence length must be vertex count - 1")

    @property
    def length(self) -> int:
        return len(self.labels)


class LabeledDigraph:
    """Acyclic digraph with opaque hashable vertex keys and labeled edges.

    Vertex ids are assigned by insertion order; iteration is deterministic.
    Duplicate (source, target) pairs are rejected.
    """

    def __init__(self, vertices=(), edges=()):
        self._index: dict = {}
        self._keys: list = []
        self._succ: list[list[tuple[int, int]]] = []
        self._pred: list[list[tuple[int, int]]] = []
        self._edge_pairs: set[tuple[int, int]] = set()
        for v in vertices:
            self.add_vertex(v)
        for u, v, label in edges:
            self.add_edge(u, v, label)

    def add_vertex(self, key) -> int:
        if key in self._index:
            return self._index[key]
        vid = len(self._keys)
        self._index[key] = vid
        self._keys.append(key)
        self._succ.append([])
        self._pred.append([])
        return vid

    def add_edge(self, u, v, label: int) -> None:
        if label < 1:
            raise ValueError("edge labels must be positive integers")
        ui = self.add_vertex(u)
        vi = self.add_vertex(v)
        if (ui, vi) in self._edge_pairs:
            raise ValueError(f"duplicate edge {u!r} -> {v!r}")
        self._edge_pairs.add((ui, vi))
        self._succ[ui].append((vi, label))
        self._pred[vi].append((ui, label))
        self.__dict__.pop("_descendants", None)
        self.__dict__.pop("_topo_order", None)

    @property
    def vertices(self) -> tuple:
        return tuple(self._keys)

    @property
    def edges(self) -> tuple:
        return tuple(
            (self._keys[u], self._keys[v], label)
            for u in range(len(self._keys))
            for v, label in self._succ[u]
        )

    @property
    def vertex_count(self) -> int:
        return len(self._keys)

    @property
    def edge_count(self) -> int:
        return len(self._edge_pairs)

    def _vid(self, key) -> int:
        try:
            return self._index[key]
        except KeyError:
            raise KeyError(f"unknown vertex {key!r}") from None

    @cached_property
    def _topo_order(self) -> tuple[int, ...]:
        indeg = [len(self._pred[v]) for v in range(self.vertex_count)]
        order = [v for v in range(self.vertex_count) if indeg[v] == 0]
        head = 0
        while head < len(order):
            u = order[head]
            head += 1
            for v, _ in self._succ[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    order.append(v)
        if len(order) != self.vertex_count:
            raise ValueError("graph has a cycle")
        return tuple(order)

    @cached_property
    def _descendants(self) -> list[frozenset[int]]:
        """Strict descendants of each vertex (memoized reachability)."""
        self._topo_order  # cycle check
        desc: list[frozenset[int] | None] = [None] * self.vertex_count
        for u in reversed(self._topo_order):
            acc = set()
            for v, _ in self._succ[u]:
                acc.add(v)
                acc |= desc[v]
            desc[u] = frozenset(acc)
        return desc

    def reachable(self, u, v) -> bool:
        ui, vi = self._vid(u), self._vid(v)
        return ui == vi or vi in self._descendants[ui]

    def sources(self) -> tuple:
        return tuple(self._keys[v] for v in range(self.vertex_count) if not self._pred[v])

    def sinks(self) -> tuple:
        return tuple(self._keys[v] for v in range(self.vertex_count) if not self._succ[v])


def monotone_paths(g: LabeledDigraph, u, v, mode: str) -> list[PathRecord]:
    """All paths from u to v whose label sequence is strictly increasing
    (mode="rising") or weakly decreasing (mode="falling")."""
    if mode not in ("rising", "falling"):
        raise ValueError("mode must be 'rising' or 'falling'")
    ui, vi = g._vid(u), g._vid(v)
    desc = g._descendants
    out: list[PathRecord] = []
    keys = g._keys

    def extend(node: int, verts: list, labels: list) -> None:
        if node == vi:
            out.append(PathRecord(tuple(keys[x] for x in verts), tuple(labels)))
        for w, label in g._succ[node]:
            if labels:
                if mode == "rising" and label <= labels[-1]:
                    continue
                if mode == "falling" and label > labels[-1]:
                    continue
            if w != vi and vi not in desc[w]:
                continue
            verts.append(w)
            labels.append(label)
            extend(w, verts, labels)
            verts.pop()
            labels.pop()

    extend(ui, [ui], [])
    return out


def all_paths(g: LabeledDigraph, u, v) -> list[PathRecord]:
    """Every path from u to v; exponential, for desk-scale oracles only."""
    ui, vi = g._vid(u), g._vid(v)
    desc = g._descendants
    keys = g._keys
    out: list[PathRecord] = []

    def extend(node: int, verts: list, labels: list) -> None:
        if node == vi:
            out.append(PathRecord(tuple(keys[x] for x in verts), tuple(labels)))
        for w, label in g._succ[node]:
            if w != vi and vi not in desc[w]:
                continue
            verts.append(w)
            labels.append(label)
            extend(w, verts, labels)
            verts.pop()
            labels.pop()

    extend(ui, [ui], [])
    return out


def _rising_paths_by_target(g: LabeledDigraph, ui: int) -> dict[int, int]:
    """Count of rising paths from ui to every other vertex (self excluded)."""
    counts: dict[int, int] = {}

    def extend(node: int, last: int | None) -> None:
        for w, label in g._succ[node]:
            if last is not None and label <= last:
                continue
            counts[w] = counts.get(w, 0) + 1
            extend(w, label)

    extend(ui, None)
    return counts


def _lexmin_beats_rising(g: LabeledDigraph, ui: int, vi: int, rising: tuple[int, ...]) -> bool:
    """True iff some path ui -> vi has a label word lexicographically smaller
    than the given rising word.  Frontier walk; exact, no path materialized."""
    desc = g._descendants
    frontier = {ui}
    for t, want in enumerate(rising):
        if vi in frontier and t < len(rising):
            return True  # a completed word is a strict prefix of the rising word
        best = None
        for node in frontier:
            for w, label in g._succ[node]:
                if w == vi or vi in desc[w]:
                    if best is None or label < best:
                        best = label
        if best is None:
            raise IntegrityError("rising word is not realizable from the frontier")
        if best < want:
            return True
        if best > want:
            raise IntegrityError("rising word is not lexicographically reachable")
        frontier = {
            w
            for node in frontier
            for w, label in g._succ[node]
            if label == want and (w == vi or vi in desc[w])
        }
    return False


def check_labeling(g: LabeledDigraph) -> str:
    """Classify the labeling of g as "EL", "ER" or "neither".

    ER: every ordered reachable pair has exactly one rising path.  EL: the
    rising path's word is additionally lexicographically first among the words
    of all paths for the pair.  Desk-scale verification oracle.
    """
    n = g.vertex_count
    rising_words: dict[tuple[int, int], tuple[int, ...]] = {}
    for ui in range(n):
        counts: dict[int, list] = {}

        def extend(node: int, labels: list) -> None:
            for w, label in g._succ[node]:
                if labels and label <= labels[-1]:
                    continue
                labels.append(label)
                if w in counts:
                    counts[w].append(tuple(labels))
                else:
                    counts[w] = [tuple(labels)]
                extend(w, labels)
                labels.pop()

        extend(ui, [])
        for vi in g._descendants[ui]:
            words = counts.get(vi, [])
            if len(words) != 1:
                return "neither"
            rising_words[(ui, vi)] = words[0]
    for (ui, vi), word in rising_words.items():
        if _lexmin_beats_rising(g, ui, vi, word):
            return "ER"
    return "EL"


def spanning_tree(g: LabeledDigraph, root, kind: str) -> dict:
    """Union of all rising paths from the root (kind="source") or to the root
    (kind="sink"), as a child -> parent map over every vertex except the root.

    Requires the root to be the unique source (resp. sink) of g and the
    relevant rising paths to be unique; violations raise ValueError as they
    witness a non-ER labeling or a wrong root.
    """
    if kind not in ("source", "sink"):
        raise ValueError("kind must be 'source' or 'sink'")
    ri = g._vid(root)
    extremes = g.sources() if kind == "source" else g.sinks()
    if tuple(extremes) != (root,):
        raise ValueError(f"root is not the unique {kind}: extremes are {extremes!r}")
    parent: dict[int, int] = {}

    if kind == "source":
        def extend(node: int, last: int | None) -> None:
            for w, label in g._succ[node]:
                if last is not None and label <= last:
                    continue
                if w in parent:
                    raise ValueError("labeling is not ER: two rising paths reach a vertex")
                parent[w] = node
                extend(w, label)
    else:
        def extend(node: int, last: int | None) -> None:
            # Walk incoming edges with decreasing labels: reversed rising paths.
            for w, label in g._pred[node]:
                if last is not None and label >= last:
                    continue
                if w in parent:
                    raise ValueError("labeling is not ER: two rising paths from a vertex")
                parent[w] = node
                extend(w, label)

    extend(ri, None)
    if len(parent) != g.vertex_count - 1:
        raise ValueError("rising paths do not cover the graph; labeling is not ER")
    return {g._keys[c]: g._keys[p] for c, p in parent.items()}


def hasse_of_closure(g: LabeledDigraph) -> LabeledDigraph:
    """Subgraph keeping edge (u, v) iff no other path joins u to v."""
    desc = g._descendants
    out = LabeledDigraph(vertices=g.vertices)
    for u in range(g.vertex_count):
        for v, label in g._succ[u]:
            redundant = any(v in desc[w] for w, _ in g._succ[u] if w != v)
            if not redundant:
                out.add_edge(g._keys[u], g._keys[v], label)
    return out


def mobius(g: LabeledDigraph, u, v, mode: str = "recursive") -> int:
    """Moebius function of the transitive closure of g.

    mode="recursive" evaluates the defining recursion (the oracle).
    mode="falling" counts falling paths in the Hasse diagram by parity and
    requires the Hasse diagram's labeling to be EL.
    """
    if mode == "recursive":
        ui, vi = g._vid(u), g._vid(v)
        desc = g._descendants
        if ui == vi:
            return 1
        if vi not in desc[ui]:
            return 0
        interval = {w for w in desc[ui] if w == vi or vi in desc[w]}
        memo: dict[int, int] = {ui: 1}
        # Topological sweep over [u, v]: mu(u, w) = -sum of mu(u, x) for x < w.
        for w in g._topo_order:
            if w not in interval:
                continue
            memo[w] = -sum(mu for x, mu in memo.items() if x != w and w in desc[x])
        return memo[vi]
    if mode == "falling":
        h = hasse_of_closure(g)
        verdict = check_labeling(h)
        if verdict != "EL":
            raise ValueError(f"falling-mode Moebius requires an EL labeling, got {verdict}")
        paths = monotone_paths(h, u, v, "falling")
        return sum(1 if p.length % 2 == 0 else -1 for p in paths)
    raise ValueError("mode must be 'recursive' or 'falling'")


def cube_fixture(d: int) -> LabeledDigraph:
    """Directed 1-skeleton of the d-cube, edges labeled by the flipped
    coordinate (1-based)."""
    if not 1 <= d <= 16:
        raise ValueError("cube dimension must be between 1 and 16")
    g = LabeledDigraph()
    for eps in itertools.product((0, 1), repeat=d):
        g.add_vertex(eps)
    for eps in itertools.product((0, 1), repeat=d):
        for k in range(d):
            if eps[k] == 0:
                target = eps[:k] + (1,) + eps[k + 1 :]
                g.add_edge(eps, target, k + 1)
    return g
