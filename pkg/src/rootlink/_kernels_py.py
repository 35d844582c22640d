"""Pure-Python integer kernels: fraction-free inversion and matmul.

These operate on lists of lists of Python ints and mirror the compiled
extension exactly; exact big-integer arithmetic makes every intermediate
division in the Bareiss sweep come out even.
"""

from __future__ import annotations

from typing import Optional

__all__ = ["inverse_scaled", "matmul_int"]

BACKEND = "python"


def inverse_scaled(a: list[list[int]]) -> Optional[tuple[int, list[list[int]]]]:
    """Invert an integer matrix, returning ``(det, adj)`` with ``adj = det * a^-1``.

    Uses the Montante/Bareiss fraction-free Gauss-Jordan sweep on the
    augmented block ``[a | I]``: every intermediate value is the determinant
    of a minor, so the running division is exact and entries stay integers.
    Returns ``None`` when ``a`` is singular.
    """
    n = len(a)
    if n == 0:
        return 1, []
    left = [row[:] for row in a]
    right = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    sign = 1
    prev = 1
    for k in range(n):
        # Find a pivot at or below row k.
        piv = -1
        for r in range(k, n):
            if left[r][k] != 0:
                piv = r
                break
        if piv < 0:
            return None
        if piv != k:
            left[k], left[piv] = left[piv], left[k]
            right[k], right[piv] = right[piv], right[k]
            sign = -sign
        pk = left[k][k]
        for i in range(n):
            if i == k:
                continue
            lik = left[i][k]
            li = left[i]
            lk = left[k]
            for j in range(n):
                if j == k:
                    continue
                li[j] = (pk * li[j] - lik * lk[j]) // prev
            ri = right[i]
            rk = right[k]
            for j in range(n):
                ri[j] = (pk * ri[j] - lik * rk[j]) // prev
            li[k] = 0
        prev = pk
    det = sign * prev
    if sign < 0:
        for i in range(n):
            row = right[i]
            for j in range(n):
                row[j] = -row[j]
    return det, right


def matmul_int(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    """Product of integer matrices (``len(a[0]) == len(b)``)."""
    n = len(a)
    if n == 0:
        return []
    m = len(b[0]) if b else 0
    bt = [[row[j] for row in b] for j in range(m)]
    return [
        [sum(x * y for x, y in zip(row, col)) for col in bt]
        for row in a
    ]
