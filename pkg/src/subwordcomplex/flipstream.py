"""The greedy flip algorithm: stream every facet exactly once by a stackless
preorder DFS over the positive sink tree or the negative source tree.

Those two trees have local father rules (flip the smallest position outside N,
resp. the largest outside P), so backtracking recomputes the father with a
single flip instead of storing ancestors: the live state is one facet with its
root array plus O(1) bookkeeping, independent of the number of facets.
"""

from __future__ import annotations

import statistics
import time

from .errors import IntegrityError
from .greedy import TreeKind, greedy_facet
from .subword import Facet, SubwordComplex, facets_inductive, flip, flippable
from .coxeter import negate, root_is_positive

STREAM_KINDS = (TreeKind.POS_SINK, TreeKind.NEG_SOURCE)

# Live working state of a stream, counted in integers: the current facet and
# the root facet (root array m*n plus positions), the inversion set of rho
# (at most m roots of n entries), and one facet-sized flip scratch buffer.
LIVE_INT_FACTOR = 4


def children(c: SubwordComplex, facet: Facet, kind: TreeKind) -> list[tuple[Facet, int, int]]:
    """Children of a facet in the chosen tree, with the labels (pos, neg) of
    the connecting flip-graph edge.  At most one flip per candidate position."""
    _check_kind(kind)
    anchor = greedy_facet(c, "negative" if kind is TreeKind.POS_SINK else "positive")
    out = []
    anchor_set = set(anchor.positions)
    for cand in facet.positions:
        got = _try_child(c, facet, cand, kind, anchor_set)
        if got is not None:
            out.append(got)
    return out


def _check_kind(kind: TreeKind) -> None:
    if kind not in STREAM_KINDS:
        raise ValueError("streaming works on the pos-sink or neg-source tree only")


def _try_child(c, facet, cand, kind, anchor_set):
    """Flip the candidate position if it produces a child of the facet."""
    r = facet.roots[cand - 1]
    if kind is TreeKind.POS_SINK:
        # Children arise from decreasing flips (negative root direction).
        if root_is_positive(r) or negate(r) not in c.rho_inversions:
            return None
    else:
        if not root_is_positive(r) or r not in c.rho_inversions:
            return None
    inside = set(facet.positions)
    neg_r = negate(r)
    partner = 0
    for k in range(1, c.m + 1):
        if k not in inside and facet.roots[k - 1] in (r, neg_r):
            partner = k
            break
    if partner == 0:
        raise IntegrityError("flippable position without a complement partner")
    if partner in anchor_set:
        return None
    if kind is TreeKind.POS_SINK:
        # The flip removes cand and inserts partner < cand; the result is a
        # child iff the father rule flips partner back, i.e. partner is the
        # minimum of (child minus N).
        for p in facet.positions:
            if p >= partner:
                break
            if p != cand and p not in anchor_set:
                return None
    else:
        # Dually: partner must be the maximum of (child minus P).
        for p in reversed(facet.positions):
            if p <= partner:
                break
            if p != cand and p not in anchor_set:
                return None
    child, j, _ = flip(c, facet, cand)
    if j != partner:
        raise IntegrityError("flip partner mismatch during child generation")
    if kind is TreeKind.POS_SINK:
        return child, partner, cand
    return child, cand, partner


class FacetStream:
    """Single-owner iterator over all facets of a complex, preorder in the
    chosen spanning tree; retains no collection of visited facets."""

    def __init__(self, c: SubwordComplex, kind: TreeKind = TreeKind.POS_SINK):
        _check_kind(kind)
        self.complex = c
        self.kind = kind
        self.root = greedy_facet(
            c, "negative" if kind is TreeKind.POS_SINK else "positive"
        )
        self._anchor_set = frozenset(self.root.positions)
        self._current: Facet | None = None
        self._resume = 0
        self._done = False
        self.yielded = 0
        self.depth = 0
        self.max_depth = 0
        self.peak_live_ints = 0
        self._track_live()

    def __iter__(self):
        return self

    def _track_live(self) -> None:
        m, n = self.complex.m, self.complex.system.rank
        live = 2 * (m * n + m)  # current facet + root facet
        live += len(self.complex.rho_inversions) * n  # inversion set
        live += m * n  # flip scratch
        if live > self.peak_live_ints:
            self.peak_live_ints = live

    def __next__(self) -> Facet:
        if self._done:
            raise StopIteration
        if self._current is None:
            self._current = self.root
            self.yielded += 1
            return self.root
        c = self.complex
        while True:
            child = self._descend()
            if child is not None:
                self._current = child
                self._resume = 0
                self.depth += 1
                self.max_depth = max(self.max_depth, self.depth)
                self.yielded += 1
                self._track_live()
                return child
            if self._current.positions == self.root.positions:
                self._done = True
                raise StopIteration
            self._backtrack()

    def _descend(self) -> Facet | None:
        c = self.complex
        facet = self._current
        for cand in facet.positions:
            if cand <= self._resume:
                continue
            got = _try_child(c, facet, cand, self.kind, self._anchor_set)
            if got is not None:
                return got[0]
        return None

    def _backtrack(self) -> None:
        c = self.complex
        facet = self._current
        anchor = self._anchor_set
        if self.kind is TreeKind.POS_SINK:
            out = min(p for p in facet.positions if p not in anchor)
        else:
            out = max(p for p in facet.positions if p not in anchor)
        parent, came_from, _ = flip(c, facet, out)
        self._current = parent
        self._resume = came_from
        self.depth -= 1
        self._track_live()


def stream_facets(c: SubwordComplex, kind: TreeKind = TreeKind.POS_SINK) -> FacetStream:
    """Iterator over all facets via the greedy flip algorithm."""
    return FacetStream(c, kind)


def live_int_bound(c: SubwordComplex) -> int:
    """Documented bound on the stream's live working state, in integers."""
    return LIVE_INT_FACTOR * c.m * c.system.rank + 4 * c.m


def benchmark(c: SubwordComplex, repetitions: int = 3) -> dict:
    """Per-facet wall-clock comparison of the greedy flip stream against the
    inductive enumerator, with the stream's structural memory counters.

    No winner is asserted; which algorithm is faster depends on the instance.
    """
    # Warm-up and cross-check.
    stream = stream_facets(c)
    count_stream = sum(1 for _ in stream)
    count_inductive = sum(1 for _ in facets_inductive(c))
    if count_stream != count_inductive:
        raise IntegrityError(
            f"facet counts disagree: stream {count_stream}, inductive {count_inductive}"
        )
    greedy_times = []
    inductive_times = []
    for _ in range(repetitions):
        t0 = time.perf_counter()
        n = sum(1 for _ in stream_facets(c))
        greedy_times.append((time.perf_counter() - t0) / n)
        t0 = time.perf_counter()
        n = sum(1 for _ in facets_inductive(c))
        inductive_times.append((time.perf_counter() - t0) / n)
    return {
        "facets": count_stream,
        "greedy_ms_per_facet": statistics.median(greedy_times) * 1000.0,
        "inductive_ms_per_facet": statistics.median(inductive_times) * 1000.0,
        "peak_live_ints": stream.peak_live_ints,
        "live_int_bound": live_int_bound(c),
        "max_depth": stream.max_depth,
    }
