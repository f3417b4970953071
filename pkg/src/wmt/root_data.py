"""Root systems, coroots and Weyl groups as integer-lattice data.

Conventions
-----------
``cartan[i][j] = <alpha_j, coroot_i>``.  Roots are integer vectors in the
simple-root basis, coroots integer vectors in the simple-coroot basis, and
the pairing of a root ``b`` with a coroot ``c`` is ``c^T . cartan . b``.
Simple reflections act by

    s_i(alpha_j)  = alpha_j  - cartan[i][j] * alpha_i
    s_i(coroot_j) = coroot_j - cartan[j][i] * coroot_i

Weyl elements are stored with their matrices on both lattices (columns are
images of the basis vectors).
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

from .errors import BadEpsilon, EpsilonNotRankOne, UnsupportedSeries

Vector = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]

SUPPORTED = {
    "A": range(1, 7),
    "B": range(2, 5),
    "C": range(2, 5),
    "D": range(4, 5),
    "G2": range(2, 3),
}


def cartan_matrix(series: str, rank: int) -> Matrix:
    """Bourbaki-numbered Cartan matrix with ``cartan[i][j] = <alpha_j, coroot_i>``.

    For B the last simple root is short, for C it is long; for G2 the first
    simple root is short.
    """
    if series not in SUPPORTED or rank not in SUPPORTED[series]:
        raise UnsupportedSeries(f"{series}{rank} is not supported")
    a = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    if series == "G2":
        return ((2, -3), (-1, 2))
    for i in range(rank - 1):
        a[i][i + 1] = a[i + 1][i] = -1
    if series == "B":
        # <alpha_{r-1}, coroot_r> = -2  (alpha_r short)
        a[rank - 1][rank - 2] = -2
    elif series == "C":
        a[rank - 2][rank - 1] = -2
    elif series == "D":
        a[rank - 2][rank - 1] = a[rank - 1][rank - 2] = 0
        a[rank - 3][rank - 1] = a[rank - 1][rank - 3] = -1
    return tuple(tuple(row) for row in a)


def expected_positive_roots(series: str, rank: int) -> int:
    return {"A": rank * (rank + 1) // 2, "B": rank * rank, "C": rank * rank,
            "D": rank * (rank - 1), "G2": 6}[series]


def expected_weyl_order(series: str, rank: int) -> int:
    from math import factorial
    if series == "A":
        return factorial(rank + 1)
    if series in ("B", "C"):
        return 2 ** rank * factorial(rank)
    if series == "D":
        return 2 ** (rank - 1) * factorial(rank)
    return 12


def is_positive(v: Vector) -> bool:
    for c in v:
        if c:
            return c > 0
    return False


def _neg(v: Vector) -> Vector:
    return tuple(-c for c in v)


def mat_vec(m: Matrix, v: Vector) -> Vector:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in m)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def determinant(m: Matrix) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    a = [list(row) for row in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class PositiveRoot:
    root: Vector
    coroot: Vector


@dataclass(frozen=True)
class RootDatum:
    series: str
    rank: int
    cartan: Matrix
    epsilon: tuple[int, ...]
    positive_roots: tuple[PositiveRoot, ...]

    def pairing(self, root: Vector, coroot: Vector) -> int:
        """<root, coroot> via Cartan contraction."""
        return sum(coroot[i] * self.cartan[i][j] * root[j]
                   for i in range(self.rank) for j in range(self.rank))

    def simple_reflection_root(self, i: int) -> Matrix:
        r = self.rank
        cols = []
        for j in range(r):
            col = [int(k == j) for k in range(r)]
            col[i] -= self.cartan[i][j]
            cols.append(col)
        return tuple(tuple(cols[j][k] for j in range(r)) for k in range(r))

    def simple_reflection_coroot(self, i: int) -> Matrix:
        r = self.rank
        cols = []
        for j in range(r):
            col = [int(k == j) for k in range(r)]
            col[i] -= self.cartan[j][i]
            cols.append(col)
        return tuple(tuple(cols[j][k] for j in range(r)) for k in range(r))

    @cached_property
    def roots(self) -> tuple[PositiveRoot, ...]:
        """All of Phi: positive roots followed by their negatives."""
        return self.positive_roots + tuple(
            PositiveRoot(_neg(p.root), _neg(p.coroot)) for p in self.positive_roots)

    @cached_property
    def coroot_of(self) -> dict[Vector, Vector]:
        return {p.root: p.coroot for p in self.roots}

    def simple_root(self, i: int) -> Vector:
        return tuple(int(k == i) for k in range(self.rank))

    def to_dict(self) -> dict:
        return {
            "series": self.series,
            "rank": self.rank,
            "cartan": [list(row) for row in self.cartan],
            "epsilon": list(self.epsilon),
            "simple_roots": [list(self.simple_root(i)) for i in range(self.rank)],
            "positive_roots": [{"root": list(p.root), "coroot": list(p.coroot)}
                               for p in self.positive_roots],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def build_root_datum(series: str, rank: int, epsilon=None) -> RootDatum:
    """Positive roots by reflection closure from the simple roots.

    Coroots ride along: the coroot of ``s_i(beta)`` is ``s_i`` applied to the
    coroot of ``beta``.

    >>> [p.root for p in build_root_datum("A", 2).positive_roots]
    [(1, 0), (0, 1), (1, 1)]
    """
    cartan = cartan_matrix(series, rank)
    epsilon = tuple(epsilon) if epsilon is not None else (0,) * rank
    if len(epsilon) != rank:
        raise BadEpsilon(f"epsilon has length {len(epsilon)}, expected {rank}")
    if any(e not in (0, 1) for e in epsilon):
        raise BadEpsilon(f"epsilon entries must be 0 or 1, got {list(epsilon)}")
    if any(epsilon) and rank > 1:
        raise EpsilonNotRankOne("epsilon = 1 is only supported for rank-one data")

    stub = RootDatum(series, rank, cartan, epsilon, ())
    sroot = [stub.simple_reflection_root(i) for i in range(rank)]
    scoroot = [stub.simple_reflection_coroot(i) for i in range(rank)]

    found: dict[Vector, Vector] = {}
    queue = deque()
    for i in range(rank):
        e = stub.simple_root(i)
        found[e] = e
        queue.append(e)
    while queue:
        beta = queue.popleft()
        for i in range(rank):
            image = mat_vec(sroot[i], beta)
            if is_positive(image) and image not in found:
                found[image] = mat_vec(scoroot[i], found[beta])
                queue.append(image)

    ordered = sorted(found, key=lambda v: (sum(v), tuple(-c for c in v)))
    positive = tuple(PositiveRoot(v, found[v]) for v in ordered)
    return RootDatum(series, rank, cartan, epsilon, positive)


@dataclass(frozen=True)
class WeylElement:
    word: tuple[int, ...]
    root_action: Matrix
    coroot_action: Matrix
    length: int

    @property
    def sign(self) -> int:
        return -1 if self.length % 2 else 1

    def act_on_root(self, v: Vector) -> Vector:
        return mat_vec(self.root_action, v)

    def act_on_coroot(self, c: Vector) -> Vector:
        return mat_vec(self.coroot_action, c)

    def to_dict(self) -> dict:
        return {"word": [i + 1 for i in self.word], "length": self.length,
                "sign": self.sign,
                "root_action": [list(r) for r in self.root_action],
                "coroot_action": [list(r) for r in self.coroot_action]}


def act_on_coroot(w: WeylElement, c: Vector) -> Vector:
    return w.act_on_coroot(c)


def negative_simple_set(w: WeylElement, datum: RootDatum | None = None) -> frozenset[int]:
    """Indices i with w(alpha_i) < 0 (0-based)."""
    return frozenset(i for i, col in enumerate(zip(*w.root_action)) if not is_positive(col))


@dataclass(frozen=True)
class WeylGroup:
    datum: RootDatum
    elements: tuple[WeylElement, ...]
    longest: int
    _index: dict = field(repr=False, compare=False)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def identity(self) -> WeylElement:
        return self.elements[0]

    @property
    def longest_element(self) -> WeylElement:
        return self.elements[self.longest]

    def find(self, root_action: Matrix) -> WeylElement:
        return self.elements[self._index[root_action]]

    @cached_property
    def _inverses(self) -> dict[Matrix, WeylElement]:
        r = self.datum.rank
        reflections = [self.datum.simple_reflection_root(i) for i in range(r)]
        out = {}
        for w in self.elements:
            m = identity(r)
            for i in reversed(w.word):
                m = mat_mul(m, reflections[i])
            out[w.root_action] = self.find(m)
        return out

    def inverse(self, w: WeylElement) -> WeylElement:
        return self._inverses[w.root_action]

    def multiply(self, a: WeylElement, b: WeylElement) -> WeylElement:
        return self.find(mat_mul(a.root_action, b.root_action))

    def to_dict(self) -> dict:
        return {"series": self.datum.series, "rank": self.datum.rank,
                "generators": [i + 1 for i in range(self.datum.rank)],
                "order": len(self.elements), "longest": self.longest,
                "elements": [w.to_dict() for w in self.elements]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _count_negated(datum: RootDatum, m: Matrix) -> int:
    return sum(1 for p in datum.positive_roots if not is_positive(mat_vec(m, p.root)))


def generate_weyl(datum: RootDatum) -> WeylGroup:
    """Breadth-first closure under right multiplication by simple reflections.

    BFS order means the first word reaching an element is a shortest word,
    hence reduced; elements are keyed by their root-lattice matrix.
    """
    r = datum.rank
    sroot = [datum.simple_reflection_root(i) for i in range(r)]
    scoroot = [datum.simple_reflection_coroot(i) for i in range(r)]
    ident = identity(r)
    elements = [WeylElement((), ident, ident, 0)]
    index = {ident: 0}
    queue = deque([0])
    while queue:
        w = elements[queue.popleft()]
        for i in range(r):
            m = mat_mul(w.root_action, sroot[i])
            if m in index:
                continue
            c = mat_mul(w.coroot_action, scoroot[i])
            word = w.word + (i,)
            length = _count_negated(datum, m)
            index[m] = len(elements)
            elements.append(WeylElement(word, m, c, length))
            queue.append(index[m])
    longest = max(range(len(elements)), key=lambda k: elements[k].length)
    return WeylGroup(datum, tuple(elements), longest, index)
