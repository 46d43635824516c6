"""
Dense exact linear algebra over Q(v).

Matrices are lists of rows of ``RationalFunc``.  Sizes in this package stay
small (a weight block rarely exceeds a few dozen vectors), so plain Gaussian
elimination with exact normalization is adequate.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .arith import RationalFunc, Scalar, as_rf

ZERO = RationalFunc(0)
ONE = RationalFunc(1)

Vector = list
Matrix = list


class SingularMatrixError(ArithmeticError):
    pass


def vec(xs: Iterable[Scalar]) -> Vector:
    return [as_rf(x) for x in xs]


def mat(rows: Iterable[Iterable[Scalar]]) -> Matrix:
    return [vec(r) for r in rows]


def zeros(n: int, m: int) -> Matrix:
    return [[ZERO] * m for _ in range(n)]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def is_zero_vec(x: Sequence[RationalFunc]) -> bool:
    return all(c.is_zero() for c in x)


def dot(x: Sequence[RationalFunc], y: Sequence[RationalFunc]) -> RationalFunc:
    s = ZERO
    for a, b in zip(x, y):
        if a and b:
            s = s + a * b
    return s


def matvec(m: Matrix, x: Sequence[RationalFunc]) -> Vector:
    return [dot(row, x) for row in m]


def vecmat(x: Sequence[RationalFunc], m: Matrix, ncols: int | None = None) -> Vector:
    n = len(m[0]) if m else (ncols or 0)
    out = [ZERO] * n
    for a, row in zip(x, m):
        if a:
            for j, b in enumerate(row):
                if b:
                    out[j] = out[j] + a * b
    return out


def matmul(a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
    if not a:
        return []
    ncols = len(b[0]) if b else 0
    return [vecmat(row, b, ncols) for row in a]


def transpose(m: Matrix, nrows_if_empty: int = 0) -> Matrix:
    if not m:
        return [[] for _ in range(nrows_if_empty)]
    return [list(col) for col in zip(*m)]


def scale(c: Scalar, x: Sequence[RationalFunc]) -> Vector:
    c = as_rf(c)
    return [c * a if a else ZERO for a in x]


def axpy(c: RationalFunc, x: Sequence[RationalFunc], y: Sequence[RationalFunc]) -> Vector:
    """y + c*x"""
    return [b + c * a if a else b for a, b in zip(x, y)]


class EchelonBasis:
    """
    Incrementally built echelon form remembering how each echelon row is
    made from the vectors that were accepted.

    ``add(x)`` accepts ``x`` when it is independent of what was accepted so
    far; ``express(x)`` writes a vector in the span as a combination of the
    accepted vectors (in acceptance order).
    """

    def __init__(self, length: int):
        self.length = length
        self.rows: list[Vector] = []
        self.pivots: list[int] = []
        self.combos: list[Vector] = []  # row k = sum_j combos[k][j] * accepted[j]
        self.count = 0

    def _reduce(self, x: Sequence[RationalFunc]) -> tuple[Vector, Vector]:
        x = list(x)
        f = [ZERO] * len(self.rows)
        for k, (row, p) in enumerate(zip(self.rows, self.pivots)):
            if x[p]:
                c = x[p] / row[p]
                f[k] = c
                x = axpy(-c, row, x)
        return x, f

    def _combine(self, f: Vector) -> Vector:
        out = [ZERO] * self.count
        for fk, combo in zip(f, self.combos):
            if fk:
                for j, t in enumerate(combo):
                    if t:
                        out[j] = out[j] + fk * t
        return out

    def add(self, x: Sequence[RationalFunc]) -> bool:
        residual, f = self._reduce(x)
        pivot = next((j for j, c in enumerate(residual) if c), None)
        if pivot is None:
            return False
        combo = [-c for c in self._combine(f)] + [ONE]
        for c in self.combos:
            c.append(ZERO)
        self.rows.append(residual)
        self.pivots.append(pivot)
        self.combos.append(combo)
        self.count += 1
        return True

    def contains(self, x: Sequence[RationalFunc]) -> bool:
        residual, _ = self._reduce(x)
        return is_zero_vec(residual)

    def express(self, x: Sequence[RationalFunc]) -> Vector:
        residual, f = self._reduce(x)
        if not is_zero_vec(residual):
            raise ValueError("vector is not in the span")
        return self._combine(f)

    @property
    def rank(self) -> int:
        return self.count


def independent_rows(rows: Sequence[Sequence[RationalFunc]]) -> list[int]:
    """Indices of the greedy (first-come) maximal independent subset."""
    if not rows:
        return []
    basis = EchelonBasis(len(rows[0]))
    return [i for i, r in enumerate(rows) if basis.add(r)]


def rank(rows: Sequence[Sequence[RationalFunc]]) -> int:
    return len(independent_rows(rows))


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv_p = ONE / aug[col][col]
        aug[col] = [inv_p * a if a else ZERO for a in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                aug[r] = axpy(-aug[r][col], aug[col], aug[r])
    return [row[n:] for row in aug]


def solve(a: Matrix, b: Sequence[RationalFunc]) -> Vector:
    """Unique solution of a x = b; ``a`` may be tall but must have full column rank."""
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    aug = [list(row) + [as_rf(bi)] for row, bi in zip(a, b)]
    pivcols = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if aug[i][col]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv_p = ONE / aug[r][col]
        aug[r] = [inv_p * x if x else ZERO for x in aug[r]]
        for i in range(nrows):
            if i != r and aug[i][col]:
                aug[i] = axpy(-aug[i][col], aug[r], aug[i])
        pivcols.append(col)
        r += 1
    if len(pivcols) < ncols:
        raise SingularMatrixError(f"system is underdetermined (rank {len(pivcols)} < {ncols})")
    for i in range(r, nrows):
        if aug[i][ncols]:
            raise SingularMatrixError("system is inconsistent")
    x = [ZERO] * ncols
    for i, col in enumerate(pivcols):
        x[col] = aug[i][ncols]
    return x


def matrix_rank_info(a: Matrix) -> int:
    return rank(a)


def mat_equal(a: Matrix, b: Matrix) -> bool:
    return len(a) == len(b) and all(
        len(r) == len(s) and all(x == y for x, y in zip(r, s)) for r, s in zip(a, b)
    )


def mat_bar(m: Matrix) -> Matrix:
    return [[x.bar() for x in row] for row in m]


def mat_to_json(m: Matrix) -> list:
    return [[str(x) for x in row] for row in m]
