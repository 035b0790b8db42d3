"""Exact linear algebra over the integers and rationals.

Everything here is exact: integer matrices use Python's arbitrary-precision
ints, subspaces carry `fractions.Fraction` entries, and rank is computed by
fraction-free (Bareiss) elimination so no intermediate value is ever rounded.
All values are immutable after construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class DimensionMismatch(ValueError):
    """Shapes are not conformable for the requested operation."""


class NotSquare(ValueError):
    """A square matrix was required."""


@dataclass(frozen=True)
class IntMatrix:
    """An immutable integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch(f"negative dimensions {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        for r in rows:
            if len(r) != ncols:
                raise DimensionMismatch("ragged rows")
        return cls(nrows, ncols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "IntMatrix":
        ents = tuple(self.at(i, j) for i in row_idx for j in col_idx)
        return IntMatrix(len(row_idx), len(col_idx), ents)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __repr__(self):  # pragma: no cover
        return f"IntMatrix({self.to_rows()!r})"


def multiply(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Exact integer matrix product a.b."""
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    out = []
    for i in range(a.rows):
        arow = a.row(i)
        for j in range(b.cols):
            out.append(sum(arow[k] * b.at(k, j) for k in range(a.cols)))
    return IntMatrix(a.rows, b.cols, tuple(out))


def matvec(a: IntMatrix, v: Sequence[int]) -> tuple[int, ...]:
    if a.cols != len(v):
        raise DimensionMismatch(f"cannot apply {a.shape} to vector of length {len(v)}")
    return tuple(sum(a.at(i, k) * v[k] for k in range(a.cols)) for i in range(a.rows))


def rank(m: IntMatrix) -> int:
    """Rank over Q via fraction-free (Bareiss) elimination.

    The single-step Bareiss update keeps every intermediate entry an integer
    (each is a minor of the original matrix), so the division below is exact
    and there is no coefficient blow-up beyond minor size.
    """
    if m.rows == 0 or m.cols == 0:
        return 0
    a = m.to_rows()
    nrows, ncols = m.rows, m.cols
    piv_row = 0
    prev = 1
    for col in range(ncols):
        pivot = None
        for i in range(piv_row, nrows):
            if a[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != piv_row:
            a[piv_row], a[pivot] = a[pivot], a[piv_row]
        p = a[piv_row][col]
        for i in range(piv_row + 1, nrows):
            ai = a[i]
            f = ai[col]
            for j in range(col + 1, ncols):
                ai[j] = (p * ai[j] - f * a[piv_row][j]) // prev
            ai[col] = 0
        prev = p
        piv_row += 1
        if piv_row == nrows:
            break
    return piv_row


def power(m: IntMatrix, k: int) -> IntMatrix:
    if not m.is_square():
        raise NotSquare(f"cannot take powers of a {m.shape} matrix")
    result = IntMatrix.identity(m.rows)
    for _ in range(k):
        result = multiply(result, m)
    return result


def eventual_rank(m: IntMatrix) -> int:
    """Stabilized rank of powers: rank(m^n) for an n x n matrix.

    rank(m^k) is nonincreasing in k and the kernel chain ker m ⊆ ker m² ⊆ …
    freezes permanently at the first plateau, so iteration may stop as soon
    as two consecutive powers have equal rank (and always by k = n).
    """
    if not m.is_square():
        raise NotSquare(f"eventual_rank needs a square matrix, got {m.shape}")
    n = m.rows
    if n == 0:
        return 0
    current = m
    r = rank(current)
    for _ in range(n - 1):
        nxt = multiply(current, m)
        r_next = rank(nxt)
        if r_next == r:
            return r
        current, r = nxt, r_next
    return r


def _rref(vectors: Iterable[Sequence[Fraction]], ambient: int) -> tuple[tuple[Fraction, ...], ...]:
    """Reduced row echelon form over Q; zero rows dropped.

    RREF is unique for a given row space, which makes it a canonical form:
    two subspaces are equal iff their bases compare equal structurally.
    """
    work = [list(v) for v in vectors]
    for v in work:
        if len(v) != ambient:
            raise DimensionMismatch(f"vector length {len(v)} != ambient {ambient}")
    basis: list[list[Fraction]] = []
    pivots: list[int] = []
    for vec in work:
        v = [Fraction(x) for x in vec]
        for b, p in zip(basis, pivots):
            if v[p]:
                c = v[p]
                for j in range(ambient):
                    v[j] -= c * b[j]
        lead = next((j for j in range(ambient) if v[j]), None)
        if lead is None:
            continue
        inv = v[lead]
        v = [x / inv for x in v]
        for b in basis:
            if b[lead]:
                c = b[lead]
                for j in range(ambient):
                    b[j] -= c * v[j]
        basis.append(v)
        pivots.append(lead)
    order = sorted(range(len(basis)), key=lambda i: pivots[i])
    return tuple(tuple(basis[i]) for i in order)


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of Q^ambient_dim, held as a canonical RREF basis."""

    ambient_dim: int
    basis: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_vectors(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        vecs = [[Fraction(x) for x in v] for v in vectors]
        return cls(ambient_dim, _rref(vecs, ambient_dim))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        eye = [[Fraction(1 if i == j else 0) for j in range(ambient_dim)] for i in range(ambient_dim)]
        return cls(ambient_dim, tuple(tuple(r) for r in eye))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, vector: Sequence) -> bool:
        v = [Fraction(x) for x in vector]
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector/ambient mismatch")
        for b in self.basis:
            lead = next(j for j in range(self.ambient_dim) if b[j])
            if v[lead]:
                c = v[lead]
                for j in range(self.ambient_dim):
                    v[j] -= c * b[j]
        return not any(v)

    def is_subspace_of(self, other: "Subspace") -> bool:
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("ambient dimensions differ")
        return all(other.contains(b) for b in self.basis)


def image_through(m: IntMatrix, s: Subspace) -> Subspace:
    """The subspace m.s = span{m v : v in s}, canonicalized."""
    if s.ambient_dim != m.cols:
        raise DimensionMismatch(f"subspace of Q^{s.ambient_dim} cannot feed a {m.shape} matrix")
    images = []
    for v in s.basis:
        images.append([sum(Fraction(m.at(i, k)) * v[k] for k in range(m.cols)) for i in range(m.rows)])
    return Subspace(m.rows, _rref(images, m.rows))
