"""Exact linear algebra over Q and Q(sqrt(d)).

Matrices are tuples of row tuples.  Elimination works on sparse rows
(``dict`` column -> value) kept in fully reduced echelon form, so kernels,
ranks and row spaces come out deterministic: pivots are always the
smallest available column.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .scalars import norm

__all__ = [
    "Echelon",
    "det",
    "div",
    "identity",
    "inverse",
    "kernel",
    "matmul",
    "matvec",
    "rank",
    "row_space",
    "solve",
    "to_sparse",
    "transpose",
    "zeros",
]


def div(a, b):
    if b == 0:
        raise ZeroDivisionError("exact division by zero")
    if isinstance(a, int) and isinstance(b, int):
        return norm(Fraction(a, b))
    return norm(a / b)


def to_sparse(row) -> dict:
    if isinstance(row, dict):
        return {c: v for c, v in row.items() if v != 0}
    return {c: v for c, v in enumerate(row) if v != 0}


class Echelon:
    """Incrementally maintained reduced row echelon form."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, dict] = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, row) -> dict:
        r = to_sparse(row)
        for p in [c for c in r if c in self.rows]:
            coef = r.get(p)
            if not coef:
                continue
            for c, v in self.rows[p].items():
                nv = norm(r.get(c, 0) - coef * v)
                if nv != 0:
                    r[c] = nv
                else:
                    r.pop(c, None)
        return r

    def add(self, row) -> bool:
        """Insert a row; return False when it was already in the span."""
        r = self.reduce(row)
        if not r:
            return False
        p = min(r)
        lead = r[p]
        if lead != 1:
            r = {c: div(v, lead) for c, v in r.items()}
        for other in self.rows.values():
            coef = other.get(p)
            if coef:
                for c, v in r.items():
                    nv = norm(other.get(c, 0) - coef * v)
                    if nv != 0:
                        other[c] = nv
                    else:
                        other.pop(c, None)
        self.rows[p] = r
        return True

    def contains(self, row) -> bool:
        return not self.reduce(row)

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def basis(self) -> list[tuple]:
        out = []
        for p in sorted(self.rows):
            r = self.rows[p]
            out.append(tuple(r.get(c, 0) for c in range(self.ncols)))
        return out

    def kernel(self) -> list[tuple]:
        """Basis of {x : row . x = 0 for every stored row}, one per free column."""
        free = [c for c in range(self.ncols) if c not in self.rows]
        out = []
        for f in free:
            x = [0] * self.ncols
            x[f] = 1
            for p, r in self.rows.items():
                v = r.get(f)
                if v:
                    x[p] = -v
            out.append(tuple(x))
        return out


def _echelon(rows: Iterable, ncols: int) -> Echelon:
    e = Echelon(ncols)
    for r in rows:
        e.add(r)
    return e


def row_space(rows: Iterable, ncols: int) -> list[tuple]:
    return _echelon(rows, ncols).basis()


def kernel(rows: Iterable, ncols: int) -> list[tuple]:
    return _echelon(rows, ncols).kernel()


def rank(rows: Iterable, ncols: int | None = None) -> int:
    rows = list(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return len(_echelon(rows, ncols))


def solve(rows: Sequence, rhs: Sequence, ncols: int):
    """A particular solution of ``rows . x = rhs`` (free variables 0) or None."""
    e = Echelon(ncols + 1)
    for r, b in zip(rows, rhs):
        sr = to_sparse(r)
        if b != 0:
            sr[ncols] = b
        e.add(sr)
    if ncols in e.rows:
        return None
    x = [0] * ncols
    for p, r in e.rows.items():
        x[p] = r.get(ncols, 0)
    return tuple(x)


def zeros(m: int, n: int) -> tuple:
    return tuple((0,) * n for _ in range(m))


def identity(n: int) -> tuple:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(M) -> tuple:
    return tuple(zip(*M)) if M else ()


def matmul(A, B) -> tuple:
    if not A:
        return ()
    Bt = transpose(B)
    ncols = len(B[0]) if B else 0
    out = []
    for row in A:
        nz = [(k, a) for k, a in enumerate(row) if a != 0]
        out.append(tuple(norm(sum((a * Bt[j][k] for k, a in nz), 0)) for j in range(ncols)))
    return tuple(out)


def matvec(M, x) -> tuple:
    nz = [(k, a) for k, a in enumerate(x) if a != 0]
    return tuple(norm(sum((a * row[k] for k, a in nz), 0)) for row in M)


def det(M):
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = div(A[i][j] * A[k][k] - A[i][k] * A[k][j], prev)
        prev = A[k][k]
    return norm(sign * A[n - 1][n - 1])


def inverse(M) -> tuple:
    n = len(M)
    e = Echelon(2 * n)
    for i, row in enumerate(M):
        r = to_sparse(row)
        r[n + i] = 1
        e.add(r)
    if any(p not in e.rows for p in range(n)):
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(e.rows[i].get(n + j, 0) for j in range(n)) for i in range(n))
