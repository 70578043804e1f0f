"""Small exact linear-algebra helpers over generic scalars."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import DivisionByZero
from .exact import LaurentPolynomial, exact_div, is_zero


def identity(n: int) -> list[list]:
    return [[1 if r == c else 0 for c in range(n)] for r in range(n)]


def matmul(A, B):
    m, k = len(A), len(B)
    p = len(B[0]) if B else 0
    out = []
    for r in range(m):
        row = []
        for c in range(p):
            s = 0
            for t in range(k):
                s = s + A[r][t] * B[t][c]
            row.append(s)
        out.append(row)
    return out


def leading_minor(M, size: int):
    return [list(row[:size]) for row in M[:size]]


def bareiss_det(M):
    """Fraction-free elimination; exact over integers, rationals and jets."""
    n = len(M)
    if n == 0:
        return 1
    a = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if is_zero(a[k][k]):
            for r in range(k + 1, n):
                if not is_zero(a[r][k]):
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = exact_div(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev)
        prev = a[k][k]
    return a[n - 1][n - 1] if sign > 0 else -a[n - 1][n - 1]


def laplace_det(M):
    """Division-free expansion along rows, memoized on the set of used columns."""
    n = len(M)
    if n == 0:
        return 1

    @lru_cache(maxsize=None)
    def rec(row: int, used: int):
        if row == n:
            return 1
        total = 0
        sign = 1
        for c in range(n):
            if used >> c & 1:
                continue
            entry = M[row][c]
            if not is_zero(entry):
                sub = rec(row + 1, used | (1 << c))
                total = total + (entry * sub if sign > 0 else -(entry * sub))
            sign = -sign
        return total

    return rec(0, 0)


def determinant(M):
    if any(isinstance(v, LaurentPolynomial) for row in M for v in row):
        return laplace_det(M)
    return bareiss_det(M)


def gaussian_det(M) -> Fraction:
    """Plain partial-pivot Gaussian elimination over the rationals."""
    n = len(M)
    a = [[Fraction(v) for v in r] for r in M]
    det = Fraction(1)
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for r in range(k + 1, n):
            f = a[r][k] / a[k][k]
            if f:
                for c in range(k, n):
                    a[r][c] -= f * a[k][c]
    return det


def require_nonzero(x, where):
    if is_zero(x):
        raise DivisionByZero(where=where)
    return x
