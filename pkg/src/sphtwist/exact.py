"""Exact integer linear algebra: fraction-free rank and integral kernels."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q by Bareiss fraction-free elimination (integer entries)."""
    m = [list(map(int, r)) for r in rows]
    if not m or not m[0]:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    r = 0
    prev = 1
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, n_rows):
            f = m[i][c]
            for jj in range(c, n_cols):
                # exact division is guaranteed by Sylvester's identity
                m[i][jj] = (p * m[i][jj] - f * m[r][jj]) // prev
        prev = p
        r += 1
        if r == n_rows:
            break
    return r


def kernel_basis(rows: Sequence[Sequence[int]], n_cols: int) -> list[list[int]]:
    """Primitive integer vectors spanning the rational kernel of ``rows``.

    Computed from the reduced row echelon form over Q and then cleared of
    denominators; each returned vector has coprime entries.
    """
    m = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * n_cols
        v[fcol] = Fraction(1)
        for row, pc in zip(m, pivots):
            v[pc] = -row[fcol]
        den = 1
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
        iv = [int(x * den) for x in v]
        g = 0
        for x in iv:
            g = gcd(g, x)
        basis.append([x // g for x in iv])
    return basis


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Matrix, v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def det(a: Matrix) -> int:
    """Integer determinant by Bareiss elimination."""
    m = [list(r) for r in a]
    n = len(m)
    sign, prev = 1, 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        p = m[c][c]
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                m[i][j] = (p * m[i][j] - m[i][c] * m[c][j]) // prev
        prev = p
    return sign * m[n - 1][n - 1]
