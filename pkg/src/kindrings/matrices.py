"""Square matrices and vectors over exact rings.

Besides plain arithmetic this holds the unitary and monomial predicates and
two ways of turning a unit vector with several nonzero entries into a
unitary matrix that is not monomial: the reflection ``I - 2 v v*`` and, when
that reflection happens to be monomial, a 2x2 rotation block.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import UsageError
from .rings import RingElement, RingSpec

__all__ = [
    "RingMatrix",
    "RingVector",
    "matrix_unit",
    "householder_from_vector",
    "non_monomial_unitary_from_vector",
    "conjugation_map",
]


class RingMatrix:
    """An immutable n x n matrix of ring elements."""

    __slots__ = ("ring", "rows")

    def __init__(self, ring: RingSpec, rows: Iterable[Iterable]):
        rows = tuple(tuple(ring.coerce(x) for x in row) for row in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise UsageError("matrix must be square and nonempty")
        self.ring = ring
        self.rows = rows

    @classmethod
    def identity(cls, ring: RingSpec, n: int) -> RingMatrix:
        return cls(ring, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ring: RingSpec, n: int) -> RingMatrix:
        return cls(ring, [[0] * n for _ in range(n)])

    @classmethod
    def parse(cls, ring: RingSpec, literal: Sequence[Sequence[str]]) -> RingMatrix:
        """Build from row-major nested lists of element strings."""
        return cls(ring, [[ring.parse_element(str(x)) for x in row] for row in literal])

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> RingElement:
        i, j = ij
        return self.rows[i][j]

    def _check(self, other: RingMatrix):
        if not isinstance(other, RingMatrix):
            raise UsageError(f"expected a matrix, got {type(other).__name__}")
        if other.ring != self.ring:
            raise UsageError(f"ring mismatch: {self.ring} vs {other.ring}")
        if other.n != self.n:
            raise UsageError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: RingMatrix) -> RingMatrix:
        self._check(other)
        return RingMatrix(
            self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        )

    def __sub__(self, other: RingMatrix) -> RingMatrix:
        self._check(other)
        return RingMatrix(
            self.ring, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        )

    def __mul__(self, other):
        if isinstance(other, (int, RingElement)):
            return self.scale(other)
        self._check(other)
        cols = list(zip(*other.rows))
        zero = self.ring.zero()
        out = []
        for row in self.rows:
            out_row = []
            for col in cols:
                acc = zero
                for a, b in zip(row, col):
                    if a and b:
                        acc = acc + a * b
                out_row.append(acc)
            out.append(out_row)
        return RingMatrix(self.ring, out)

    def scale(self, r) -> RingMatrix:
        r = self.ring.coerce(r)
        return RingMatrix(self.ring, [[r * x for x in row] for row in self.rows])

    __rmul__ = scale

    def adjoint(self) -> RingMatrix:
        """Conjugate transpose."""
        return RingMatrix(self.ring, [[x.conjugate() for x in col] for col in zip(*self.rows)])

    def is_identity(self) -> bool:
        return all(
            (x == 1) if i == j else x.is_zero()
            for i, row in enumerate(self.rows)
            for j, x in enumerate(row)
        )

    def is_unitary(self) -> bool:
        a = self.adjoint()
        return (self * a).is_identity() and (a * self).is_identity()

    def is_self_adjoint(self) -> bool:
        return self == self.adjoint()

    def is_monomial(self) -> bool:
        """Exactly one nonzero entry in every row and every column."""
        if any(sum(1 for x in row if x) != 1 for row in self.rows):
            return False
        return all(sum(1 for x in col if x) == 1 for col in zip(*self.rows))

    def is_diagonal(self) -> bool:
        return all(
            x.is_zero() for i, row in enumerate(self.rows) for j, x in enumerate(row) if i != j
        )

    def __eq__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self.ring == other.ring and self.rows == other.rows

    def __hash__(self):
        return hash((self.ring, self.rows))

    @property
    def sort_key(self) -> tuple:
        return tuple(x.sort_key for row in self.rows for x in row)

    def to_document(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.rows]

    def __repr__(self) -> str:
        return f"RingMatrix({self.ring}, {self.to_document()})"


def matrix_unit(ring: RingSpec, n: int, i: int, j: int) -> RingMatrix:
    """E_ij with 0-based indices."""
    return RingMatrix(
        ring, [[1 if (r, c) == (i, j) else 0 for c in range(n)] for r in range(n)]
    )


class RingVector:
    """A nonempty column vector of ring elements."""

    __slots__ = ("ring", "entries")

    def __init__(self, ring: RingSpec, entries: Iterable):
        entries = tuple(ring.coerce(x) for x in entries)
        if not entries:
            raise UsageError("vector must be nonempty")
        self.ring = ring
        self.entries = entries

    @classmethod
    def parse(cls, ring: RingSpec, literal: Sequence[str]) -> RingVector:
        return cls(ring, [ring.parse_element(str(x)) for x in literal])

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __eq__(self, other):
        if not isinstance(other, RingVector):
            return NotImplemented
        return self.ring == other.ring and self.entries == other.entries

    def __hash__(self):
        return hash((self.ring, self.entries))

    def norm_sq_sum(self) -> RingElement:
        total = self.ring.zero()
        for x in self.entries:
            total = total + x.norm_sq()
        return total

    def is_unit_vector(self) -> bool:
        return self.norm_sq_sum() == 1

    def nonzero_indices(self) -> list[int]:
        return [k for k, x in enumerate(self.entries) if x]

    def outer_adjoint(self) -> RingMatrix:
        """v v*."""
        return RingMatrix(self.ring, [[a * b.conjugate() for b in self.entries] for a in self.entries])

    def to_document(self) -> list[str]:
        return [str(x) for x in self.entries]

    def __repr__(self) -> str:
        return f"RingVector({self.ring}, {self.to_document()})"


def _as_vector(v) -> RingVector:
    if not isinstance(v, RingVector):
        raise UsageError(f"expected a RingVector, got {type(v).__name__}")
    return v


def householder_from_vector(v: RingVector) -> RingMatrix:
    """``I - 2 v v*`` for a unit vector v; self-adjoint and unitary."""
    v = _as_vector(v)
    if not v.is_unit_vector():
        raise UsageError(f"{v.to_document()} is not a unit vector")
    U = RingMatrix.identity(v.ring, len(v)) - v.outer_adjoint().scale(2)
    assert U.is_self_adjoint() and U.is_unitary()
    return U


def non_monomial_unitary_from_vector(v: RingVector) -> RingMatrix:
    """A unitary, non-monomial matrix built from a unit vector with >= 2 nonzeros.

    The reflection ``I - 2 v v*`` is returned unless it is monomial, which
    happens exactly when v has two nonzero entries, both of norm-square 1/2.
    Then the block ``[[v_i, -conj(v_j)], [v_j, conj(v_i)]]`` is placed on
    rows and columns {i, j} of the identity, i and j being the first two
    nonzero positions.
    """
    v = _as_vector(v)
    nz = v.nonzero_indices()
    if len(nz) < 2:
        raise UsageError("need a unit vector with at least two nonzero entries")
    U = householder_from_vector(v)
    if U.is_monomial():
        i, j = nz[0], nz[1]
        a, b = v[i], v[j]
        n = len(v)
        rows = [list(r) for r in RingMatrix.identity(v.ring, n).rows]
        rows[i][i], rows[i][j] = a, -b.conjugate()
        rows[j][i], rows[j][j] = b, a.conjugate()
        U = RingMatrix(v.ring, rows)
    assert U.is_unitary() and not U.is_monomial()
    return U


def conjugation_map(U: RingMatrix):
    """The *-automorphism X -> U X U* of M_n(R), presented on R(R_n).

    Returns a :class:`~kindrings.algebra.StarHomomorphism` sending each
    arrow indicator 1_(i,j) to the element for ``U E_ij U*``.
    """
    from .algebra import AlgebraElement, StarHomomorphism, from_matrix
    from .groupoids import full_equivalence_groupoid

    if not isinstance(U, RingMatrix) or not U.is_unitary():
        raise UsageError("conjugation map needs a unitary matrix")
    n = U.n
    G = full_equivalence_groupoid(n)
    Ua = U.adjoint()
    images: dict[str, AlgebraElement] = {}
    for i in range(n):
        for j in range(n):
            images[f"({i + 1},{j + 1})"] = from_matrix(U * matrix_unit(U.ring, n, i, j) * Ua, G)
    return StarHomomorphism(G, G, U.ring, images)
