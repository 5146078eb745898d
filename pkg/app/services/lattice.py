"""
Integer row echelon forms with exact Python integers.

``Echelon`` keeps one row per pivot column and inserts vectors with
unimodular 2x2 row operations (extended gcd). Each row may carry a tag;
a ``combine`` callback says how tags follow the row operations, which
lets the same elimination run on group elements whose leading layer is
the vector (see collector.saturate). ``IntLattice`` is the untagged case,
kept in Hermite normal form by sympy.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, Generic, Iterable, List, Optional, Sequence, Tuple, TypeVar

from sympy import ZZ
from sympy.core.intfunc import igcdex
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form

from app.services.groups import GroupError

T = TypeVar("T")

Combine = Callable[[T, int, Optional[T], int], T]


class DimensionError(GroupError):
    pass


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s, t, g = igcdex(int(a), int(b))
    s, t, g = int(s), int(t), int(g)
    if g < 0:
        s, t, g = -s, -t, -g
    return g, s, t


@dataclass
class Insertion(Generic[T]):
    """Outcome of one insertion."""

    residue: Optional[T] = None
    changed: List[T] = field(default_factory=list)
    displaced: List[T] = field(default_factory=list)

    @property
    def grew(self) -> bool:
        return bool(self.changed)


class Echelon(Generic[T]):
    def __init__(self, dimension: int, combine: Optional[Combine] = None):
        if dimension < 0:
            raise DimensionError(f"dimension must be non-negative, got {dimension}")
        self.dimension = dimension
        self.combine = combine
        self.rows: Dict[int, Tuple[List[int], Optional[T]]] = {}

    def _combine(self, t1, c1, t2, c2):
        if self.combine is None:
            return None
        return self.combine(t1, c1, t2, c2)

    def _check(self, vector: Sequence[int]) -> List[int]:
        if len(vector) != self.dimension:
            raise DimensionError(f"vector of length {len(vector)} inserted into dimension {self.dimension}")
        return [int(v) for v in vector]

    def insert(self, vector: Sequence[int], tag: Optional[T] = None) -> Insertion[T]:
        v = self._check(vector)
        result: Insertion[T] = Insertion()
        while True:
            pivot = next((i for i, x in enumerate(v) if x), None)
            if pivot is None:
                result.residue = tag
                return result

            if pivot not in self.rows:
                if v[pivot] < 0:
                    v = [-x for x in v]
                    tag = self._combine(tag, -1, None, 0)
                self.rows[pivot] = (v, tag)
                result.changed.append(tag)
                return result

            row, row_tag = self.rows[pivot]
            a, b = row[pivot], v[pivot]
            if b % a == 0:
                q = b // a
                v = [x - q * y for x, y in zip(v, row)]
                tag = self._combine(tag, 1, row_tag, -q)
                continue

            g, s, t = xgcd(a, b)
            new_row = [s * y + t * x for x, y in zip(v, row)]
            new_tag = self._combine(row_tag, s, tag, t)
            v = [(a // g) * x - (b // g) * y for x, y in zip(v, row)]
            tag = self._combine(tag, a // g, row_tag, -(b // g))
            self.rows[pivot] = (new_row, new_tag)
            result.changed.append(new_tag)
            result.displaced.append(row_tag)

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> List[int]:
        return sorted(self.rows)

    def basis(self) -> List[List[int]]:
        return [list(self.rows[p][0]) for p in self.pivots]

    def tags(self) -> List[T]:
        return [self.rows[p][1] for p in self.pivots]

    def index(self) -> Optional[int]:
        """Index of the row span in Z^dimension; None when it has lower rank."""
        if self.rank < self.dimension:
            return None
        index = 1
        for p in self.pivots:
            index *= self.rows[p][0][p]
        return index


class IntLattice:
    """Untagged lattice in Z^dimension, kept in Hermite normal form.

    Rows have positive pivots and the entries above each pivot are reduced
    mod it. The form is recomputed with sympy's ``hermite_normal_form``
    whenever a generator is added.
    """

    def __init__(self, dimension: int, rows: Iterable[Sequence[int]] = ()):
        if dimension < 0:
            raise DimensionError(f"dimension must be non-negative, got {dimension}")
        self.dimension = dimension
        self._basis: List[List[int]] = []
        generators = [self._check(row) for row in rows]
        if generators:
            self._basis = _hermite_rows(dimension, generators)

    def _check(self, vector: Sequence[int]) -> List[int]:
        if len(vector) != self.dimension:
            raise DimensionError(f"vector of length {len(vector)} inserted into dimension {self.dimension}")
        return [int(v) for v in vector]

    def insert(self, vector: Sequence[int]) -> bool:
        """Add a generator; return True when the lattice grew."""
        v = self._check(vector)
        if not any(v):
            return False
        updated = _hermite_rows(self.dimension, self._basis + [v])
        grew = updated != self._basis
        self._basis = updated
        return grew

    @property
    def rank(self) -> int:
        return len(self._basis)

    @property
    def pivots(self) -> List[int]:
        return [_pivot(row) for row in self._basis]

    def basis(self) -> List[List[int]]:
        return [list(row) for row in self._basis]

    def index(self) -> Optional[int]:
        """Index in Z^dimension; None when the rank is lower."""
        if self.rank < self.dimension:
            return None
        index = 1
        for p, row in zip(self.pivots, self._basis):
            index *= row[p]
        return index

    def copy(self) -> "IntLattice":
        return IntLattice(self.dimension, self._basis)

    def __repr__(self) -> str:
        return f"IntLattice(dimension={self.dimension}, rows={self._basis})"


def _pivot(row: Sequence[int]) -> int:
    return next(i for i, x in enumerate(row) if x)


def _hermite_rows(dimension: int, vectors: List[List[int]]) -> List[List[int]]:
    vectors = [v for v in vectors if any(v)]
    if not vectors or dimension == 0:
        return []
    # sympy's form is column-style with each pivot at the last nonzero entry;
    # reversing coordinates turns its columns into pivot-first rows
    columns = [[ZZ(v[dimension - 1 - i]) for v in vectors] for i in range(dimension)]
    form = hermite_normal_form(DomainMatrix(columns, (dimension, len(vectors)), ZZ)).to_Matrix()
    rows = [[int(form[dimension - 1 - i, j]) for i in range(dimension)] for j in range(form.cols)]
    return sorted((row for row in rows if any(row)), key=_pivot)


def hnf_insert(lattice: IntLattice, vector: Sequence[int]) -> IntLattice:
    """Return a new lattice spanned by the old rows and vector."""
    updated = lattice.copy()
    updated.insert(vector)
    return updated


def lattice_index(lattice) -> Optional[int]:
    return lattice.index()
