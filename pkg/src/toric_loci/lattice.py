"""Exact integer linear algebra.

Everything here works on plain Python ints, so there is no overflow and no
floating point.  Matrices are small (a few dozen rows at most), which keeps
the list-of-lists representation competitive.

The single normal form used throughout is the *column* Hermite normal form:
``H = A @ U`` with ``U`` unimodular and ``H`` lower echelon.  Integral
solvability of ``A x = b`` and integer kernels are both read off from it.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import InputError

LatticeVector = tuple[int, ...]


def vector(entries: Iterable[int]) -> LatticeVector:
    out = tuple(entries)
    for e in out:
        if isinstance(e, bool) or not isinstance(e, int):
            raise InputError(f"lattice vector entries must be integers, got {e!r}")
    return out


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def primitive(v: Sequence[int]) -> LatticeVector:
    """Divide ``v`` by the gcd of its entries (signs are kept)."""
    g = 0
    for e in v:
        g = gcd(g, e)
    if g == 0:
        raise InputError("the zero vector has no primitive representative")
    return tuple(e // g for e in v)


def is_primitive(v: Sequence[int]) -> bool:
    g = 0
    for e in v:
        g = gcd(g, e)
    return g == 1


@dataclass(frozen=True)
class IntegerMatrix:
    """Rectangular integer matrix.

    ``ncols`` is stored explicitly so that matrices with zero rows still know
    their width (an empty equation system in ``n`` unknowns).
    """

    rows: tuple[LatticeVector, ...]
    ncols: int

    def __post_init__(self):
        for r in self.rows:
            if len(r) != self.ncols:
                raise InputError("matrix rows must all have the same length")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], ncols: int | None = None) -> "IntegerMatrix":
        rows = tuple(vector(r) for r in rows)
        if ncols is None:
            if not rows:
                raise InputError("cannot infer the width of a matrix without rows")
            ncols = len(rows[0])
        return cls(rows, ncols)

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> "IntegerMatrix":
        return cls(tuple(tuple(c[i] for c in columns) for i in range(nrows)), len(columns))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def column(self, j: int) -> LatticeVector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[LatticeVector]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(tuple(self.columns()), self.nrows)

    def apply(self, v: Sequence[int]) -> LatticeVector:
        if len(v) != self.ncols:
            raise InputError(f"vector of length {len(v)} does not fit a {self.shape} matrix")
        return tuple(dot(r, v) for r in self.rows)

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.ncols != other.nrows:
            raise InputError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        return IntegerMatrix(tuple(tuple(dot(r, c) for c in cols) for r in self.rows), other.ncols)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


MatrixLike = IntegerMatrix | Sequence[Sequence[int]]


def as_matrix(A: MatrixLike, ncols: int | None = None) -> IntegerMatrix:
    if isinstance(A, IntegerMatrix):
        if ncols is not None and ncols != A.ncols:
            raise InputError(f"expected {ncols} columns, got {A.ncols}")
        return A
    return IntegerMatrix.from_rows(A, ncols)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def _column_echelon(H: list[list[int]], U: list[list[int]] | None) -> list[tuple[int, int]]:
    """Bring ``H`` (mutated in place) into column Hermite normal form.

    The same column operations are applied to ``U`` when given.  Returns the
    pivot positions ``(row, column)``; pivot columns are ``0, 1, ...``.
    """
    m = len(H)
    n = len(H[0]) if m else (len(U) if U is not None else 0)
    pivots: list[tuple[int, int]] = []
    c = 0
    for i in range(m):
        if c == n:
            break
        row = H[i]
        for j in range(c + 1, n):
            b = row[j]
            if b == 0:
                continue
            a = row[c]
            g, s, t = _xgcd(a, b)
            x, y = a // g, b // g
            # [col_c, col_j] <- [s col_c + t col_j, -y col_c + x col_j]; det = 1
            for M in (H, U) if U is not None else (H,):
                for r in M:
                    rc, rj = r[c], r[j]
                    r[c] = s * rc + t * rj
                    r[j] = x * rj - y * rc
        p = row[c]
        if p == 0:
            continue
        if p < 0:
            for M in (H, U) if U is not None else (H,):
                for r in M:
                    r[c] = -r[c]
            p = -p
        for j in range(c):
            q = row[j] // p
            if q:
                for M in (H, U) if U is not None else (H,):
                    for r in M:
                        r[j] -= q * r[c]
        pivots.append((i, c))
        c += 1
    return pivots


def hnf(A: MatrixLike) -> tuple[IntegerMatrix, IntegerMatrix]:
    """Column Hermite normal form: returns ``(H, U)`` with ``H = A @ U``.

    ``U`` is unimodular.  ``H`` is lower echelon: the pivot of column ``k``
    is its first nonzero entry, pivots move strictly down, are positive, and
    the entries to the left of a pivot in its row lie in ``[0, pivot)``.
    """
    A = as_matrix(A)
    n = A.ncols
    H = [list(r) for r in A.rows]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    _column_echelon(H, U)
    return IntegerMatrix(tuple(map(tuple, H)), n), IntegerMatrix(tuple(map(tuple, U)), n)


def _hnf_basis(columns: Sequence[Sequence[int]], dim: int) -> list[LatticeVector]:
    """Canonical basis (HNF columns) of the lattice spanned by ``columns``."""
    if not columns:
        return []
    H = [[c[i] for c in columns] for i in range(dim)]
    pivots = _column_echelon(H, None)
    return [tuple(H[i][k] for i in range(dim)) for k in range(len(pivots))]


@dataclass(frozen=True)
class AffineLatticeSolution:
    """All integral solutions of ``A x = b``: ``witness + span_Z(kernel_basis)``.

    The kernel basis is in column Hermite normal form and the witness is
    reduced against it, so the representation is canonical.
    """

    witness: LatticeVector
    kernel_basis: tuple[LatticeVector, ...]

    def contains(self, x: Sequence[int]) -> bool:
        diff = [a - b for a, b in zip(x, self.witness)]
        return in_lattice(diff, self.kernel_basis)


def _check_system(A: MatrixLike, b: Sequence[int], ncols: int | None) -> tuple[IntegerMatrix, LatticeVector]:
    A = as_matrix(A, ncols)
    b = vector(b)
    if len(b) != A.nrows:
        raise InputError(f"right-hand side has length {len(b)}, system has {A.nrows} rows")
    return A, b


def _forward_substitute(H: list[list[int]], pivots: list[tuple[int, int]], b: Sequence[int], n: int) -> list[int] | None:
    y = [0] * n
    for i, c in pivots:
        row = H[i]
        acc = b[i] - sum(row[j] * y[j] for j in range(c))
        q, r = divmod(acc, row[c])
        if r:
            return None
        y[c] = q
    rank = len(pivots)
    for i, row in enumerate(H):
        if sum(row[j] * y[j] for j in range(rank)) != b[i]:
            return None
    return y


def solve_affine_lattice(A: MatrixLike, b: Sequence[int], ncols: int | None = None) -> AffineLatticeSolution | None:
    """Integral solutions of ``A x = b``, or ``None`` when there are none.

    A system with no rows is solvable (witness 0, kernel = standard basis).
    """
    A, b = _check_system(A, b, ncols)
    n = A.ncols
    H = [list(r) for r in A.rows]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    pivots = _column_echelon(H, U)
    y = _forward_substitute(H, pivots, b, n)
    if y is None:
        return None
    rank = len(pivots)
    x = [dot(U[i], y) for i in range(n)]
    kernel = _hnf_basis([[U[i][j] for i in range(n)] for j in range(rank, n)], n)
    for k, col in enumerate(kernel):
        r = next(i for i, e in enumerate(col) if e)
        q = x[r] // col[r]
        if q:
            x = [xi - q * ci for xi, ci in zip(x, col)]
    return AffineLatticeSolution(tuple(x), tuple(kernel))


def has_integer_solution(A: MatrixLike, b: Sequence[int], ncols: int | None = None) -> bool:
    """Decide integral solvability of ``A x = b`` without tracking ``U``."""
    A, b = _check_system(A, b, ncols)
    if A.nrows == 0:
        return True
    H = [list(r) for r in A.rows]
    pivots = _column_echelon(H, None)
    return _forward_substitute(H, pivots, b, A.ncols) is not None


def kernel_basis(A: MatrixLike, ncols: int | None = None) -> list[LatticeVector]:
    """Basis of the integer kernel ``{x in Z^n : A x = 0}`` (saturated)."""
    A = as_matrix(A, ncols)
    sol = solve_affine_lattice(A, [0] * A.nrows)
    assert sol is not None
    return list(sol.kernel_basis)


def in_lattice(v: Sequence[int], basis: Sequence[Sequence[int]]) -> bool:
    """Is ``v`` an integer combination of ``basis``?"""
    if not basis:
        return not any(v)
    return has_integer_solution(IntegerMatrix.from_columns(basis, len(v)), v)


def determinant(A: MatrixLike) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = as_matrix(A)
    n = A.nrows
    if n != A.ncols:
        raise InputError("determinant of a non-square matrix")
    if n == 0:
        return 1
    M = [list(r) for r in A.rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rank(vectors: Iterable[Sequence[int]]) -> int:
    """Rank over Q of a collection of integer vectors."""
    basis: list[tuple[int, list[int]]] = []  # (pivot index, row)
    for v in vectors:
        row = list(v)
        for p, b in basis:
            if row[p]:
                f, g = row[p], b[p]
                row = [g * x - f * y for x, y in zip(row, b)]
        piv = next((i for i, x in enumerate(row) if x), None)
        if piv is not None:
            basis.append((piv, list(primitive(row))))
    return len(basis)


def rational_solve(A: MatrixLike, b: Sequence[int], ncols: int | None = None) -> tuple[Fraction, ...] | None:
    """One rational solution of ``A x = b`` (free variables set to 0), or ``None``."""
    A, b = _check_system(A, b, ncols)
    n = A.ncols
    M = [[Fraction(e) for e in r] + [Fraction(bi)] for r, bi in zip(A.rows, b)]
    piv_cols = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [e * inv for e in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    if any(row[n] != 0 for row in M[r:]):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        x[c] = M[i][n]
    return tuple(x)
