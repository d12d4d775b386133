"""Exact linear algebra over Q.

Scalars are :class:`fractions.Fraction`; vectors are tuples of Fractions and
matrices are tuples of row tuples.  Nothing here ever touches a float.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

QVector = tuple  # tuple[Fraction, ...]
QMatrix = tuple  # tuple[QVector, ...]


class DimensionError(ValueError):
    pass


def qvec(values: Iterable) -> QVector:
    return tuple(Fraction(v) for v in values)


def zeros(n: int) -> QVector:
    return (Fraction(0),) * n


def constant(n: int, r=1) -> QVector:
    return (Fraction(r),) * n


def is_zero(v: Sequence[Fraction]) -> bool:
    return not any(v)


def add(u: Sequence[Fraction], v: Sequence[Fraction]) -> QVector:
    if len(u) != len(v):
        raise DimensionError("length mismatch")
    return tuple(a + b for a, b in zip(u, v))


def scale(c, v: Sequence[Fraction]) -> QVector:
    c = Fraction(c)
    return tuple(c * a for a in v)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    """Rational bilinear form; the Hermitian form degenerates to this over Q."""
    if len(u) != len(v):
        raise DimensionError("length mismatch")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def qmat(rows: Iterable[Iterable]) -> QMatrix:
    return tuple(qvec(r) for r in rows)


def identity(n: int) -> QMatrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def matvec(A: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> QVector:
    if A and len(A[0]) != len(v):
        raise DimensionError("matrix/vector mismatch")
    return tuple(sum((a * b for a, b in zip(row, v) if a and b), Fraction(0)) for row in A)


def matmul(A: Sequence[Sequence[Fraction]], B: Sequence[Sequence[Fraction]]) -> QMatrix:
    if len(A[0]) != len(B):
        raise DimensionError("inner dimensions differ")
    cols = list(zip(*B))
    return tuple(
        tuple(sum((a * b for a, b in zip(row, col) if a and b), Fraction(0)) for col in cols)
        for row in A
    )


def mat_pow(A: Sequence[Sequence[Fraction]], k: int) -> QMatrix:
    result = identity(len(A))
    base = tuple(tuple(r) for r in A)
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result


def trace(A: Sequence[Sequence[Fraction]]) -> Fraction:
    return sum((A[i][i] for i in range(len(A))), Fraction(0))


def transpose(A: Sequence[Sequence[Fraction]]) -> QMatrix:
    return tuple(zip(*A))


def _integral(v: Sequence) -> list[int]:
    """Integer multiple of ``v`` (clears denominators)."""
    den = 1
    for a in v:
        if isinstance(a, Fraction) and a.denominator != 1:
            den = den * a.denominator // math.gcd(den, a.denominator)
    return [int(a * den) for a in v]


def _primitive(v: list[int]) -> list[int]:
    g = 0
    for a in v:
        if a:
            g = math.gcd(g, a)
            if g == 1:
                return v
    return [a // g for a in v] if g > 1 else v


class QSubspace:
    """Subspace of Q^n held in reduced row echelon form.

    ``basis`` is the canonical RREF (pivot entries 1, pivot columns cleared),
    so equal spans give identical bases.  Elimination itself runs on
    primitive integer multiples of those rows, which avoids Fraction overhead
    without changing the result.  Instances are immutable; :meth:`insert`
    returns a new subspace.
    """

    __slots__ = ("ambient", "_irows", "_pivots", "_basis")

    def __init__(self, ambient: int, rows: Iterable[Sequence] = ()):
        self.ambient = ambient
        self._irows: tuple[tuple[int, ...], ...] = ()
        self._pivots: tuple[int, ...] = ()
        self._basis = None
        sub = self
        for r in rows:
            sub, _ = sub.insert(r)
        self._irows, self._pivots = sub._irows, sub._pivots

    @classmethod
    def _raw(cls, ambient: int, irows, pivots) -> "QSubspace":
        out = cls.__new__(cls)
        out.ambient = ambient
        out._irows = irows
        out._pivots = pivots
        out._basis = None
        return out

    @classmethod
    def span(cls, ambient: int, vectors: Iterable[Sequence]) -> "QSubspace":
        return cls(ambient, vectors)

    @property
    def dim(self) -> int:
        return len(self._irows)

    @property
    def basis(self) -> QMatrix:
        if self._basis is None:
            self._basis = tuple(
                tuple(Fraction(a, row[p]) for a in row) for row, p in zip(self._irows, self._pivots)
            )
        return self._basis

    @property
    def integer_basis(self) -> tuple[tuple[int, ...], ...]:
        """Primitive integer multiples of the RREF rows."""
        return self._irows

    @property
    def pivots(self) -> tuple[int, ...]:
        return self._pivots

    def _residual(self, v: Sequence) -> list[int]:
        if len(v) != self.ambient:
            raise DimensionError(f"vector of length {len(v)} in ambient dimension {self.ambient}")
        r = _integral(v)
        for row, p in zip(self._irows, self._pivots):
            c = r[p]
            if c:
                d = row[p]
                r = _primitive([d * a - c * b for a, b in zip(r, row)])
        return r

    def contains(self, v: Sequence) -> bool:
        return not any(self._residual(v))

    def insert(self, v: Sequence) -> tuple["QSubspace", bool]:
        r = self._residual(v)
        nz = next((i for i, a in enumerate(r) if a), None)
        if nz is None:
            return self, False
        if r[nz] < 0:
            r = [-a for a in r]
        r = _primitive(r)
        lead = r[nz]
        rows = []
        for row in self._irows:
            c = row[nz]
            if c:
                row = tuple(_primitive([lead * a - c * b for a, b in zip(row, r)]))
            rows.append(row)
        pos = sum(1 for p in self._pivots if p < nz)
        rows.insert(pos, tuple(r))
        pivots = list(self._pivots)
        pivots.insert(pos, nz)
        return QSubspace._raw(self.ambient, tuple(rows), tuple(pivots)), True

    def sum(self, other: "QSubspace") -> "QSubspace":
        if other.ambient != self.ambient:
            raise DimensionError("ambient dimensions differ")
        out = self
        for r in other._irows:
            out, _ = out.insert(r)
        return out

    def __add__(self, other: "QSubspace") -> "QSubspace":
        return self.sum(other)

    def issubspace(self, other: "QSubspace") -> bool:
        return all(other.contains(r) for r in self._irows)

    def __eq__(self, other):
        return (
            isinstance(other, QSubspace)
            and self.ambient == other.ambient
            and self._pivots == other._pivots
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self):
        return f"QSubspace(dim={self.dim}, ambient={self.ambient})"


def rref_insert(sub: QSubspace, v: Sequence) -> tuple[QSubspace, bool]:
    return sub.insert(v)


def contains(sub: QSubspace, v: Sequence) -> bool:
    return sub.contains(v)


def dim(sub: QSubspace) -> int:
    return sub.dim


def subspace_sum(a: QSubspace, b: QSubspace) -> QSubspace:
    return a.sum(b)


def nullspace(A: Sequence[Sequence]) -> list[QVector]:
    """Basis of {x : A x = 0}."""
    if not A:
        return []
    ncols = len(A[0])
    sub = QSubspace.span(ncols, A)
    basis = sub.basis
    pivots = set(sub.pivots)
    out = []
    for free in range(ncols):
        if free in pivots:
            continue
        x = [Fraction(0)] * ncols
        x[free] = Fraction(1)
        for row, p in zip(basis, sub.pivots):
            x[p] = -row[free]
        out.append(tuple(x))
    return out


def rank(A: Sequence[Sequence]) -> int:
    if not A:
        return 0
    return QSubspace.span(len(A[0]), A).dim
