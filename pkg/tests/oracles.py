"""Independent brute-force oracles used by the test suite.

Everything here recomputes quantities from first principles (exhaustive
enumeration, transforms over the face lattice, subword searches) so the
library paths are checked against computations that share no code with them.
"""

from __future__ import annotations

import itertools

from subwordcomplex import elgraph
from subwordcomplex.subword import SubwordComplex, facets_inductive

FACE_CAP = 2**20


def all_faces(c: SubwordComplex) -> set[frozenset[int]]:
    """Every face of the complex, as the union of the facet power sets."""
    faces: set[frozenset[int]] = set()
    for facet in facets_inductive(c):
        for r in range(len(facet) + 1):
            for sub in itertools.combinations(facet, r):
                faces.add(frozenset(sub))
                if len(faces) > FACE_CAP:
                    raise RuntimeError("face enumeration cap exceeded")
    return faces


def h_vector_from_faces(c: SubwordComplex) -> tuple[int, ...]:
    """h-vector via the f-vector transform: sum f_(i-1) (t-1)^(d-i) with
    coefficients read off against t^(d-i)."""
    d = c.facet_size
    f = [0] * (d + 1)  # f[i] = number of faces with i vertices, f[0] = 1
    for face in all_faces(c):
        f[len(face)] += 1
    # Polynomial in t, coefficient list indexed by power.
    poly = [0] * (d + 1)
    for i in range(d + 1):
        # f[i] * (t - 1)^(d - i)
        e = d - i
        for j in range(e + 1):
            binom = 1
            for t in range(j):
                binom = binom * (e - t) // (t + 1)
            poly[j] += f[i] * binom * (-1) ** (e - j)
    # poly[j] is the coefficient of t^j; h_k is the coefficient of t^(d-k).
    return tuple(poly[d - k] for k in range(d + 1))


def trim_h(h: tuple[int, ...]) -> tuple[int, ...]:
    """Drop trailing zeros so in-degree histograms compare with transforms."""
    out = list(h)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


def brute_lexmin_word(g: elgraph.LabeledDigraph, u, v) -> tuple[int, ...] | None:
    """Lexicographically smallest label word over all paths, by enumeration."""
    paths = elgraph.all_paths(g, u, v)
    return min((p.labels for p in paths), default=None)


def brute_check_labeling(g: elgraph.LabeledDigraph) -> str:
    """Reference ER/EL classification by full path enumeration."""
    verts = g.vertices
    rising_words = {}
    for a in verts:
        for b in verts:
            if a == b or not g.reachable(a, b):
                continue
            rising = elgraph.monotone_paths(g, a, b, "rising")
            if len(rising) != 1:
                return "neither"
            rising_words[(a, b)] = rising[0].labels
    for (a, b), word in rising_words.items():
        if word != brute_lexmin_word(g, a, b):
            return "ER"
    return "EL"


def brute_sorting_positions(system, w, c_word, copies: int = 12) -> tuple[int, ...]:
    """Positions of the lexicographically first reduced subword of c^copies
    equal to w, found by exhaustive search over position subsets."""
    length = system.length(w)
    letters = tuple(c_word) * copies
    best = None
    for sub in itertools.combinations(range(1, len(letters) + 1), length):
        if best is not None and sub >= best:
            continue
        if system.element_of_word(letters[p - 1] for p in sub) == w:
            best = sub
    if best is None:
        raise ValueError("not enough copies to express the element")
    return best


def prefix_weak_leq(system, u, w) -> bool:
    """Weak order by the prefix definition: some v has uv = w with lengths
    adding up."""
    v = system.multiply(system.inverse(u), w)
    return system.length(u) + system.length(v) == system.length(w)
