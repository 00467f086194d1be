"""Exact rational scalars and integer/rational linear algebra.

Rationals are :class:`fractions.Fraction`.  Matrices are plain lists of
rows; integer lattices are kept as tuples of integer row vectors in Hermite
normal form.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction
IntMatrix = list  # list[tuple[int, ...]]
RatMatrix = list  # list[list[Fraction]]


class InconsistentSystemError(ValueError):
    """A linear system has no solution."""


class RankDeficiencyError(ValueError):
    """A linear system that was required to have a unique solution does not."""

    def __init__(self, rank, cols):
        super().__init__(f"rank {rank} < {cols} unknowns")
        self.rank = rank
        self.cols = cols


def as_rational(value) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact rational: {value!r}")


def rational_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rat_arith(a, b, op: str) -> Fraction:
    a, b = as_rational(a), as_rational(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise ZeroDivisionError("rational division by zero")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def _row_reduce(rows: list[list[Fraction]], ncols: int):
    """Gauss-Jordan elimination in place on the first ``ncols`` columns.

    Returns the list of pivot columns.
    """
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        pivot_row = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [v - factor * w for v, w in zip(rows[i], pivot_row)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def rank(A: Sequence[Sequence]) -> int:
    if not A:
        return 0
    rows = [[as_rational(v) for v in row] for row in A]
    return len(_row_reduce(rows, len(rows[0])))


def solve_linear(A: Sequence[Sequence], b: Sequence, *, require_unique: bool = False) -> list[Fraction]:
    """Solve ``A x = b`` exactly.

    Free unknowns are set to zero.  Raises :class:`InconsistentSystemError`
    if there is no solution and, with ``require_unique``,
    :class:`RankDeficiencyError` if the solution is not unique.
    """
    if len(A) != len(b):
        raise ValueError(f"{len(A)} equations but {len(b)} right-hand sides")
    ncols = len(A[0]) if A else 0
    rows = []
    for row, rhs in zip(A, b):
        if len(row) != ncols:
            raise ValueError("ragged matrix")
        rows.append([as_rational(v) for v in row] + [as_rational(rhs)])
    pivots = _row_reduce(rows, ncols)
    for row in rows[len(pivots):]:
        if row[ncols] != 0:
            raise InconsistentSystemError(f"inconsistent system (rank {len(pivots)})")
    if require_unique and len(pivots) < ncols:
        raise RankDeficiencyError(len(pivots), ncols)
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = rows[i][ncols]
    return x


def solve_linear_multi(A: Sequence[Sequence], rhs: Sequence[Sequence], *, require_unique: bool = False) -> list[list[Fraction]]:
    """Solve ``A x = b`` for every ``b`` in ``rhs`` with one elimination."""
    ncols = len(A[0]) if A else 0
    k = len(rhs)
    if any(len(b) != len(A) for b in rhs):
        raise ValueError("right-hand side length differs from row count")
    rows = []
    for i, row in enumerate(A):
        if len(row) != ncols:
            raise ValueError("ragged matrix")
        rows.append([as_rational(v) for v in row] + [as_rational(b[i]) for b in rhs])
    pivots = _row_reduce(rows, ncols)
    for row in rows[len(pivots):]:
        if any(row[ncols:]):
            raise InconsistentSystemError(f"inconsistent system (rank {len(pivots)})")
    if require_unique and len(pivots) < ncols:
        raise RankDeficiencyError(len(pivots), ncols)
    out = []
    for j in range(k):
        x = [Fraction(0)] * ncols
        for i, c in enumerate(pivots):
            x[c] = rows[i][ncols + j]
        out.append(x)
    return out


def mat_vec(A: Sequence[Sequence], x: Sequence) -> list:
    return [sum((a * v for a, v in zip(row, x)), Fraction(0)) for row in A]


# -- integer lattices ---------------------------------------------------------


class _Echelon:
    """Incremental integer row echelon form (pivots strictly increasing)."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[list[int]] = []  # sorted by pivot column
        self.pivot_cols: list[int] = []

    def add(self, vec: Iterable[int]):
        v = list(vec)
        if len(v) != self.dim:
            raise ValueError(f"vector of length {len(v)} in dimension {self.dim}")
        i = 0
        while True:
            lead = next((c for c in range(self.dim) if v[c]), None)
            if lead is None:
                return
            while i < len(self.pivot_cols) and self.pivot_cols[i] < lead:
                i += 1
            if i == len(self.pivot_cols) or self.pivot_cols[i] != lead:
                if v[lead] < 0:
                    v = [-a for a in v]
                self.rows.insert(i, v)
                self.pivot_cols.insert(i, lead)
                self._size_reduce(i)
                return
            row = self.rows[i]
            a, b = row[lead], v[lead]
            if b % a == 0:
                k = b // a
                v = [y - k * x for x, y in zip(row, v)]
                continue
            g, s, t = _xgcd(a, b)
            new_row = [s * x + t * y for x, y in zip(row, v)]
            v = [(a // g) * y - (b // g) * x for x, y in zip(row, v)]
            self.rows[i] = new_row
            self._size_reduce(i)

    def _size_reduce(self, i: int):
        """Reduce row ``i`` by the rows below it, then the rows above by row ``i``."""
        rows, piv = self.rows, self.pivot_cols
        if rows[i][piv[i]] < 0:
            rows[i] = [-x for x in rows[i]]
        for k in range(i, len(rows)):
            r = rows[k]
            for m in range(k + 1, len(rows)):
                c = piv[m]
                q = r[c] // rows[m][c]
                if q:
                    r = [x - q * y for x, y in zip(r, rows[m])]
            rows[k] = r
        for k in range(i):
            c = piv[i]
            q = rows[k][c] // rows[i][c]
            if q:
                rows[k] = [x - q * y for x, y in zip(rows[k], rows[i])]

    def hermite(self) -> list[tuple[int, ...]]:
        rows = [list(r) for r in self.rows]
        for i, c in enumerate(self.pivot_cols):
            if rows[i][c] < 0:
                rows[i] = [-x for x in rows[i]]
            p = rows[i][c]
            for k in range(i):
                q = rows[k][c] // p
                if q:
                    rows[k] = [x - q * y for x, y in zip(rows[k], rows[i])]
        return [tuple(r) for r in rows]


def _xgcd(a: int, b: int):
    """Return ``(g, s, t)`` with ``g = s*a + t*b = gcd(a, b) > 0``."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hermite_basis(generators: Iterable[Sequence[int]], dim: int | None = None) -> list[tuple[int, ...]]:
    """Hermite normal form basis of the lattice spanned by ``generators``.

    Rows are in echelon form with positive pivots and entries above each
    pivot reduced into ``[0, pivot)``; the result is canonical for the
    lattice, so equal lattices give equal bases.
    """
    gens = [tuple(int(x) for x in g) for g in generators]
    if not gens:
        return []
    if dim is None:
        dim = len(gens[0])
    if any(len(g) != dim for g in gens):
        raise ValueError("generators have different lengths")
    ech = _Echelon(dim)
    for g in gens:
        ech.add(g)
    return ech.hermite()


def lattice_member(v: Sequence[int], basis: Sequence[Sequence[int]]) -> bool:
    """True iff ``v`` is an integer combination of the rows of ``basis``.

    ``basis`` must be in echelon form, as returned by :func:`hermite_basis`.
    """
    v = [int(x) for x in v]
    if basis and len(basis[0]) != len(v):
        raise ValueError(f"vector of length {len(v)} against lattice of dimension {len(basis[0])}")
    for row in basis:
        c = next(k for k, x in enumerate(row) if x)
        if any(v[:c]):
            return False
        if v[c] % row[c]:
            return False
        k = v[c] // row[c]
        if k:
            v = [x - k * y for x, y in zip(v, row)]
    return not any(v)
