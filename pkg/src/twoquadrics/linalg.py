"""Small exact linear algebra over ``fractions.Fraction`` and Python ints.

Matrices are tuples of row tuples. Everything here is exact; there is no
floating point path.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

Vector = tuple
Matrix = tuple


def as_fractions(v: Sequence) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(as_fractions(r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(n))
        for i in range(n)
    )


def diagonal(entries: Sequence) -> Matrix:
    n = len(entries)
    return tuple(
        tuple(Fraction(entries[i]) if i == j else Fraction(0) for j in range(n))
        for i in range(n)
    )


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def mat_vec(a: Matrix, x: Sequence) -> tuple:
    return tuple(dot(row, x) for row in a)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def from_columns(cols: Sequence[Sequence]) -> Matrix:
    return transpose(tuple(tuple(c) for c in cols))


def _rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(as_fractions(r)) for r in rows]
    pivots: list[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    m, piv = _rref(rows)
    return tuple(tuple(r) for r in m), tuple(piv)


def rank(rows: Sequence[Sequence]) -> int:
    return len(_rref(rows)[1])


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(as_fractions(row)) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    red, piv = _rref(aug)
    if len(piv) < n or piv[n - 1] != n - 1:
        raise ValueError("matrix is singular")
    return tuple(tuple(r[n:]) for r in red)


def determinant(a: Matrix) -> Fraction:
    m = [list(as_fractions(r)) for r in a]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def solve(a: Matrix, b: Sequence) -> tuple[Fraction, ...]:
    """Unique solution of ``a x = b`` for square invertible ``a``."""
    return mat_vec(inverse(a), as_fractions(b))


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[tuple[Fraction, ...]]:
    """Basis of ``{x : row . x = 0 for all rows}``."""
    if ncols is None:
        ncols = len(rows[0])
    red, piv = _rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in zip(red, piv):
            v[p] = -r[f]
        basis.append(tuple(v))
    return basis


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector by a positive factor to a primitive integer vector."""
    fr = as_fractions(v)
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in fr), 1)
    ints = [int(x * den) for x in fr]
    g = reduce(gcd, (abs(x) for x in ints), 0)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def primitive_int(v: Sequence[int]) -> tuple[int, ...]:
    g = reduce(gcd, (abs(x) for x in v), 0)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)
