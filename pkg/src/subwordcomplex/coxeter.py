"""Exact finite Coxeter systems of crystallographic type.

All data is integral: roots are integer coordinate vectors in the simple-root
basis, group elements are integer matrices (column ``j`` is the image of the
``j``-th simple root), and every operation is exact.  Supported types are
products of A_n, B_n, C_n, D_n, E6, E7, E8, F4 and G2; the dihedral groups
I2(2), I2(3), I2(4), I2(6) are reachable as A1xA1, A2, B2 and G2.

Generator and word indices are 1-based throughout, matching the usual
combinatorial conventions.
"""

from __future__ import annotations

import re
from functools import reduce
from math import factorial

from .errors import CapExceededError, ParseError, UnsupportedTypeError

Root = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]
GenWord = tuple[int, ...]

RANK_CAP = 10
GROUP_ENUM_CAP = 10**7

_TYPE_RE = re.compile(r"([A-Za-z])(\d+)")

_EXCEPTIONAL_ORDERS = {
    ("E", 6): 51840,
    ("E", 7): 2903040,
    ("E", 8): 696729600,
    ("F", 4): 1152,
    ("G", 2): 12,
}


def _cartan_block(letter: str, n: int) -> tuple[list[list[int]], list[int]]:
    """Cartan matrix and integer symmetrizer of one irreducible factor."""
    a = [[2 * (i == j) for j in range(n)] for i in range(n)]

    def path(i: int, j: int) -> None:
        a[i][j] = -1
        a[j][i] = -1

    if letter == "A":
        for i in range(n - 1):
            path(i, i + 1)
        return a, [1] * n
    if letter == "B":
        if n < 2:
            raise UnsupportedTypeError("B requires rank >= 2")
        for i in range(n - 1):
            path(i, i + 1)
        a[n - 1][n - 2] = -2
        return a, [2] * (n - 1) + [1]
    if letter == "C":
        if n < 2:
            raise UnsupportedTypeError("C requires rank >= 2")
        for i in range(n - 1):
            path(i, i + 1)
        a[n - 2][n - 1] = -2
        return a, [1] * (n - 1) + [2]
    if letter == "D":
        if n < 2:
            raise UnsupportedTypeError("D requires rank >= 2")
        for i in range(n - 2):
            path(i, i + 1)
        if n >= 3:
            path(n - 3, n - 1)
        return a, [1] * n
    if letter == "E":
        if n not in (6, 7, 8):
            raise UnsupportedTypeError("E requires rank 6, 7 or 8")
        # Bourbaki numbering: chain 1-3-4-...-n with node 2 attached to node 4.
        for i in range(2, n - 1):
            path(i, i + 1)
        path(0, 2)
        path(1, 3)
        return a, [1] * n
    if letter == "F":
        if n != 4:
            raise UnsupportedTypeError("F requires rank 4")
        path(0, 1)
        path(2, 3)
        a[1][2] = -1
        a[2][1] = -2
        return a, [2, 2, 1, 1]
    if letter == "G":
        if n != 2:
            raise UnsupportedTypeError("G requires rank 2")
        a[0][1] = -1
        a[1][0] = -3
        return a, [3, 1]
    raise UnsupportedTypeError(f"unsupported type {letter}{n} (not crystallographic)")


def _irreducible_order(letter: str, n: int) -> int:
    if letter == "A":
        return factorial(n + 1)
    if letter in ("B", "C"):
        return 2**n * factorial(n)
    if letter == "D":
        return 2 ** (n - 1) * factorial(n)
    return _EXCEPTIONAL_ORDERS[(letter, n)]


def parse_type_spec(spec: str) -> list[tuple[str, int]]:
    """Parse a type descriptor like ``"A3"`` or ``"b2xA1"`` into factors."""
    factors = []
    for part in spec.strip().split("x"):
        m = _TYPE_RE.fullmatch(part.strip())
        if m is None:
            raise ParseError(f"cannot parse type descriptor {part!r}")
        letter, n = m.group(1).upper(), int(m.group(2))
        if letter in ("H", "I"):
            raise UnsupportedTypeError(
                f"unsupported type {letter}{n}: only crystallographic types are "
                "available (use A2, B2, G2 for I2(3), I2(4), I2(6))"
            )
        if letter not in "ABCDEFG":
            raise UnsupportedTypeError(f"unsupported type {letter}{n}")
        if n < 1:
            raise ParseError(f"rank must be positive in {part!r}")
        factors.append((letter, n))
    return factors


class CoxeterSystem:
    """A finite crystallographic Coxeter system with its enumerated root system.

    Immutable after construction.  ``cartan[i][j]`` is the Cartan integer
    a_ij = 2(alpha_i, alpha_j)/(alpha_i, alpha_i) (0-based), so the generator
    action reads s_i(alpha_j) = alpha_j - a_ij alpha_i.
    """

    def __init__(self, cartan, symmetrizer, type_name: str | None = None, order: int | None = None):
        n = len(cartan)
        if n > RANK_CAP:
            raise CapExceededError(f"rank {n} exceeds cap {RANK_CAP}")
        self.rank = n
        self.cartan: Matrix = tuple(tuple(int(x) for x in row) for row in cartan)
        for i in range(n):
            if self.cartan[i][i] != 2:
                raise ValueError("Cartan diagonal must be 2")
        self.symmetrizer: tuple[int, ...] = tuple(int(d) for d in symmetrizer)
        # Symmetrized form 2(alpha_i, alpha_j) up to a per-component scale.
        self.sym_form: Matrix = tuple(
            tuple(self.symmetrizer[i] * self.cartan[i][j] for j in range(n)) for i in range(n)
        )
        for i in range(n):
            for j in range(n):
                if self.sym_form[i][j] != self.sym_form[j][i]:
                    raise ValueError("symmetrizer does not symmetrize the Cartan matrix")
        self.simple_roots: tuple[Root, ...] = tuple(
            tuple(int(i == j) for j in range(n)) for i in range(n)
        )
        self.identity: Matrix = self.simple_roots
        self.generators: tuple[Matrix, ...] = tuple(
            tuple(
                tuple(int(k == j) - self.cartan[i][j] * int(k == i) for j in range(n))
                for k in range(n)
            )
            for i in range(n)
        )
        self.positive_roots: tuple[Root, ...] = self._enumerate_positive_roots()
        self.positive_root_set = frozenset(self.positive_roots)
        self.type_name = type_name if type_name is not None else classify_cartan(self.cartan)
        self.order = order if order is not None else _order_from_type(self.type_name)

    def __repr__(self) -> str:
        return f"CoxeterSystem({self.type_name}, rank={self.rank}, positive_roots={len(self.positive_roots)})"

    def _enumerate_positive_roots(self) -> tuple[Root, ...]:
        found = set(self.simple_roots)
        queue = list(self.simple_roots)
        while queue:
            beta = queue.pop()
            for i in range(self.rank):
                image = self.apply_generator(i + 1, beta)
                if root_is_positive(image) and image not in found:
                    found.add(image)
                    queue.append(image)
        return tuple(sorted(found, key=lambda r: (sum(r), r)))

    # -- root and matrix arithmetic ------------------------------------------

    def apply_generator(self, i: int, beta: Root) -> Root:
        """Image of a root under the simple reflection s_i (1-based)."""
        row = self.cartan[i - 1]
        c = sum(row[j] * beta[j] for j in range(self.rank))
        out = list(beta)
        out[i - 1] -= c
        return tuple(out)

    def apply(self, w: Matrix, beta: Root) -> Root:
        """Image of a root under a group element."""
        n = self.rank
        return tuple(sum(w[k][j] * beta[j] for j in range(n)) for k in range(n))

    def right_mul(self, w: Matrix, i: int) -> Matrix:
        """w * s_i (1-based generator index)."""
        row = self.cartan[i - 1]
        i0 = i - 1
        return tuple(
            tuple(r[j] - row[j] * r[i0] for j in range(self.rank)) for r in w
        )

    def left_mul(self, i: int, w: Matrix) -> Matrix:
        """s_i * w (1-based generator index)."""
        i0 = i - 1
        row = self.cartan[i0]
        new_row = tuple(
            w[i0][j] - sum(row[l] * w[l][j] for l in range(self.rank))
            for j in range(self.rank)
        )
        return tuple(new_row if k == i0 else w[k] for k in range(self.rank))

    def multiply(self, u: Matrix, v: Matrix) -> Matrix:
        n = self.rank
        return tuple(
            tuple(sum(u[i][k] * v[k][j] for k in range(n)) for j in range(n))
            for i in range(n)
        )

    def right_descent(self, w: Matrix, i: int) -> bool:
        """True iff l(w s_i) < l(w), i.e. w(alpha_i) is a negative root."""
        i0 = i - 1
        for k in range(self.rank):
            c = w[k][i0]
            if c:
                return c < 0
        raise ValueError("zero column in element matrix")

    def reflection_in_root(self, beta: Root, gamma: Root) -> Root:
        """Image of gamma under the reflection orthogonal to the root beta."""
        n = self.rank
        phi = tuple(sum(self.sym_form[k][j] * beta[j] for j in range(n)) for k in range(n))
        den = sum(beta[k] * phi[k] for k in range(n))
        num = 2 * sum(gamma[k] * phi[k] for k in range(n))
        coef, rem = divmod(num, den)
        if rem:
            raise ValueError("non-integral reflection coefficient; not a root pair")
        return tuple(gamma[k] - coef * beta[k] for k in range(n))

    # -- words, lengths, inversions ------------------------------------------

    def element_of_word(self, word) -> Matrix:
        w = self.identity
        for q in word:
            if not 1 <= q <= self.rank:
                raise ValueError(f"generator index {q} out of range 1..{self.rank}")
            w = self.right_mul(w, q)
        return w

    def apply_word_to_root(self, word, beta: Root) -> Root:
        """Image of beta under the element q_1 ... q_k (rightmost letter acts first)."""
        for q in reversed(tuple(word)):
            beta = self.apply_generator(q, beta)
        return beta

    def inversions(self, w: Matrix) -> frozenset[Root]:
        """inv(w): positive roots sent to negative roots by w^-1."""
        out = []
        for gamma in self.positive_roots:
            image = self.apply(w, gamma)
            if not root_is_positive(image):
                out.append(tuple(-x for x in image))
        return frozenset(out)

    def length(self, w: Matrix) -> int:
        count = 0
        for gamma in self.positive_roots:
            if not root_is_positive(self.apply(w, gamma)):
                count += 1
        return count

    def reduced_word(self, w: Matrix) -> GenWord:
        """A canonical reduced word, chosen by greedy smallest right descent."""
        rev = []
        while w != self.identity:
            for i in range(1, self.rank + 1):
                if self.right_descent(w, i):
                    rev.append(i)
                    w = self.right_mul(w, i)
                    break
            else:
                raise ValueError("non-identity element without right descent")
        return tuple(reversed(rev))

    def inverse(self, w: Matrix) -> Matrix:
        return self.element_of_word(tuple(reversed(self.reduced_word(w))))

    def weak_leq(self, u: Matrix, w: Matrix) -> bool:
        """Right weak order: u <= w iff inv(u) is contained in inv(w)."""
        return self.inversions(u) <= self.inversions(w)

    def longest_element_word(self) -> GenWord:
        """A reduced word for the longest element, by greedy ascent."""
        w = self.identity
        word = []
        while True:
            for i in range(1, self.rank + 1):
                if not self.right_descent(w, i):
                    word.append(i)
                    w = self.right_mul(w, i)
                    break
            else:
                return tuple(word)

    def demazure_product(self, word) -> Matrix:
        """Greatest element reachable as a product of a subword of the word."""
        v = self.identity
        for q in word:
            if not self.right_descent(v, q):
                v = self.right_mul(v, q)
        return v

    def group_elements(self) -> list[Matrix]:
        """All group elements, BFS from the identity; capped."""
        if self.order > GROUP_ENUM_CAP:
            raise CapExceededError(
                f"group order {self.order} exceeds enumeration cap {GROUP_ENUM_CAP}"
            )
        seen = {self.identity}
        frontier = [self.identity]
        out = [self.identity]
        while frontier:
            nxt = []
            for w in frontier:
                for i in range(1, self.rank + 1):
                    u = self.right_mul(w, i)
                    if u not in seen:
                        seen.add(u)
                        nxt.append(u)
                        out.append(u)
            frontier = nxt
        return out

    # -- sorting words and sortability ---------------------------------------

    def _check_coxeter_word(self, c) -> GenWord:
        c = tuple(c)
        if sorted(c) != list(range(1, self.rank + 1)):
            raise ValueError("not a Coxeter word: each generator must appear exactly once")
        return c

    def sorting_positions(self, w: Matrix, c) -> tuple[int, ...]:
        """1-based positions within c^infinity of the c-sorting word of w.

        The c-sorting word is the lexicographically first (as a position
        sequence) reduced subword of c^infinity for w; it is produced by the
        greedy scan which takes a letter whenever it shortens the remainder.
        """
        c = self._check_coxeter_word(c)
        u = w
        uinv = self.inverse(w)
        positions = []
        pos = 0
        idle = 0
        while u != self.identity:
            s = c[pos % self.rank]
            pos += 1
            # l(s u) < l(u) iff u^-1(alpha_s) is negative iff s is a right
            # descent of u^-1.
            if self.right_descent(uinv, s):
                positions.append(pos)
                u = self.left_mul(s, u)
                uinv = self.right_mul(uinv, s)
                idle = 0
            else:
                idle += 1
                if idle > self.rank:
                    raise ValueError("sorting scan stalled; input is not a group element")
        return tuple(positions)

    def sorting_word(self, w: Matrix, c) -> GenWord:
        """The c-sorting word of w as a sequence of generator indices."""
        c = self._check_coxeter_word(c)
        return tuple(c[(p - 1) % self.rank] for p in self.sorting_positions(w, c))

    def sorting_blocks(self, w: Matrix, c) -> list[frozenset[int]]:
        """Sets of generators taken in each pass of c during the sorting scan."""
        c = self._check_coxeter_word(c)
        positions = self.sorting_positions(w, c)
        nblocks = 0 if not positions else (positions[-1] - 1) // self.rank + 1
        blocks = [set() for _ in range(nblocks)]
        for p in positions:
            blocks[(p - 1) // self.rank].add(c[(p - 1) % self.rank])
        return [frozenset(b) for b in blocks]

    def is_sortable(self, w: Matrix, c) -> bool:
        """True iff the sorting-word blocks are weakly nested."""
        blocks = self.sorting_blocks(w, c)
        return all(blocks[k] >= blocks[k + 1] for k in range(len(blocks) - 1))


def root_is_positive(beta: Root) -> bool:
    """Sign of a root: positive iff its first nonzero coordinate is positive."""
    for x in beta:
        if x:
            return x > 0
    raise ValueError("zero vector is not a root")


def negate(beta: Root) -> Root:
    return tuple(-x for x in beta)


def _order_from_type(type_name: str) -> int:
    total = 1
    for letter, n in parse_type_spec(type_name):
        total *= _irreducible_order(letter, n)
    return total


def classify_cartan(cartan) -> str:
    """Name the type of a valid crystallographic Cartan matrix, e.g. "A2xA1"."""
    n = len(cartan)
    adj = [set() for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j and cartan[i][j] != 0:
                adj[i].add(j)
    seen = [False] * n
    names = []
    for start in range(n):
        if seen[start]:
            continue
        comp = []
        stack = [start]
        seen[start] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
        names.append(_classify_component(cartan, adj, sorted(comp)))
    names.sort(key=lambda s: (s[0], -int(s[1:])))
    return "x".join(names)


def _classify_component(cartan, adj, comp) -> str:
    r = len(comp)
    if r == 1:
        return "A1"
    bonds = {
        (i, j): cartan[i][j] * cartan[j][i]
        for i in comp
        for j in adj[i]
        if j in comp and i < j
    }
    maxbond = max(bonds.values())
    if maxbond == 3:
        return "G2"
    if maxbond == 2:
        if r == 4 and all(len(adj[v]) <= 2 for v in comp):
            i, j = next((e for e, b in bonds.items() if b == 2))
            if len(adj[i]) == 2 and len(adj[j]) == 2:
                return "F4"
        # B or C: decided by which end of the double bond carries the -2 row.
        i, j = next((e for e, b in bonds.items() if b == 2))
        short = i if cartan[i][j] == -2 else j
        return f"B{r}" if len(adj[short]) == 1 or r == 2 else f"C{r}"
    degrees = sorted(len(adj[v] & set(comp)) for v in comp)
    if degrees[-1] <= 2:
        return f"A{r}"
    branch = next(v for v in comp if len(adj[v]) == 3)
    arms = sorted(_arm_length(adj, branch, first) for first in adj[branch])
    if arms[0] == 1 and arms[1] == 1:
        return f"D{r}"
    if arms == [1, 2, r - 4]:
        return f"E{r}"
    raise ValueError(f"unrecognized Cartan component of rank {r}")


def _arm_length(adj, branch, first) -> int:
    length = 1
    prev, cur = branch, first
    while True:
        nxt = [v for v in adj[cur] if v != prev]
        if not nxt:
            return length
        prev, cur = cur, nxt[0]
        length += 1


def system_from_spec(spec: str) -> CoxeterSystem:
    """Build a Coxeter system from a type descriptor like "A3" or "A2xA1"."""
    factors = parse_type_spec(spec)
    total_rank = sum(n for _, n in factors)
    if total_rank > RANK_CAP:
        raise CapExceededError(f"total rank {total_rank} exceeds cap {RANK_CAP}")
    cartan = [[0] * total_rank for _ in range(total_rank)]
    symmetrizer = []
    offset = 0
    for letter, n in factors:
        block, d = _cartan_block(letter, n)
        for i in range(n):
            for j in range(n):
                cartan[offset + i][offset + j] = block[i][j]
        symmetrizer.extend(d)
        offset += n
    type_name = "x".join(f"{letter}{n}" for letter, n in factors)
    order = reduce(lambda acc, f: acc * _irreducible_order(*f), factors, 1)
    return CoxeterSystem(cartan, symmetrizer, type_name=type_name, order=order)


def parse_word(text: str) -> GenWord:
    """Parse a word literal: comma- or space-separated 1-based generator indices."""
    parts = text.replace(",", " ").split()
    if not parts and text.strip():
        raise ParseError(f"cannot parse word literal {text!r}")
    try:
        return tuple(int(p) for p in parts)
    except ValueError as exc:
        raise ParseError(f"cannot parse word literal {text!r}: {exc}") from None
