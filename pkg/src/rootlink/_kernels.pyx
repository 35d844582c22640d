# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled integer kernels: fraction-free inversion and matmul.

Mirrors ``_kernels_py`` exactly.  Entries are arbitrary-precision Python
ints (minor determinants overflow machine words), so the speedup comes from
compiled loop and indexing overhead, not native arithmetic.
"""

__all__ = ["inverse_scaled", "matmul_int"]

BACKEND = "compiled"


def inverse_scaled(a):
    """Invert an integer matrix, returning ``(det, adj)`` with ``adj = det * a^-1``.

    Montante/Bareiss fraction-free Gauss-Jordan on the augmented block
    ``[a | I]``; returns ``None`` when ``a`` is singular.
    """
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t i, j, k, r, piv
    cdef int sign = 1
    if n == 0:
        return 1, []
    cdef list left = [list(row) for row in a]
    cdef list right = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    cdef list li, lk, ri, rk
    prev = 1
    for k in range(n):
        piv = -1
        for r in range(k, n):
            if (<list>left[r])[k] != 0:
                piv = r
                break
        if piv < 0:
            return None
        if piv != k:
            left[k], left[piv] = left[piv], left[k]
            right[k], right[piv] = right[piv], right[k]
            sign = -sign
        lk = <list>left[k]
        rk = <list>right[k]
        pk = lk[k]
        for i in range(n):
            if i == k:
                continue
            li = <list>left[i]
            lik = li[k]
            for j in range(n):
                if j == k:
                    continue
                li[j] = (pk * li[j] - lik * lk[j]) // prev
            ri = <list>right[i]
            for j in range(n):
                ri[j] = (pk * ri[j] - lik * rk[j]) // prev
            li[k] = 0
        prev = pk
    det = prev if sign > 0 else -prev
    if sign < 0:
        for i in range(n):
            ri = <list>right[i]
            for j in range(n):
                ri[j] = -ri[j]
    return det, right


def matmul_int(a, b):
    """Product of integer matrices (``len(a[0]) == len(b)``)."""
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t i, j, k, m, p
    if n == 0:
        return []
    p = len(b)
    m = len(b[0]) if p else 0
    cdef list rows_b = [list(r) for r in b]
    cdef list bt = [[(<list>rows_b[k])[j] for k in range(p)] for j in range(m)]
    cdef list out = []
    cdef list row, col, orow
    for i in range(n):
        row = list(a[i])
        orow = []
        for j in range(m):
            col = <list>bt[j]
            acc = 0
            for k in range(p):
                acc = acc + row[k] * col[k]
            orow.append(acc)
        out.append(orow)
    return out
