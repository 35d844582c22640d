"""Exact rational matrices and the integer elimination kernels."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from rootlink import RationalMatrix, to_fraction
from rootlink import _kernels_py
from rootlink.errors import SingularMatrixError

try:
    from rootlink import _kernels as _kernels_c
except ImportError:  # pure-Python install
    _kernels_c = None

KERNELS = [_kernels_py] + ([_kernels_c] if _kernels_c is not None else [])


def gauss_jordan_inverse(rows: list[list[Fraction]]) -> list[list[Fraction]] | None:
    """Plain Fraction Gauss-Jordan with partial pivoting, as a second opinion."""
    n = len(rows)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        scale = aug[col][col]
        aug[col] = [x / scale for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def random_rational_matrix(rng: random.Random, n: int) -> RationalMatrix:
    return RationalMatrix(
        [
            [Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3))) for _ in range(n)]
            for _ in range(n)
        ]
    )


@pytest.mark.parametrize("value,expected", [
    (3, Fraction(3)),
    ("5/2", Fraction(5, 2)),
    ("-7", Fraction(-7)),
    (Fraction(1, 3), Fraction(1, 3)),
])
def test_to_fraction(value, expected):
    assert to_fraction(value) == expected


def test_to_fraction_rejects_float():
    with pytest.raises(TypeError):
        to_fraction(0.5)


def test_basic_ops():
    m = RationalMatrix([[1, 2], [3, 4]])
    assert m.shape == (2, 2)
    assert m[1, 0] == 3
    assert m.rows[0] == (Fraction(1), Fraction(2))
    assert m.transpose().rows == ((Fraction(1), Fraction(3)), (Fraction(2), Fraction(4)))
    assert (m + m).rows == ((2, 4), (6, 8))
    assert (m - m) == RationalMatrix.zeros(2, 2)
    assert m.scale(Fraction(1, 2)).rows == ((Fraction(1, 2), 1), (Fraction(3, 2), 2))
    assert (-m)[0, 1] == -2
    assert m.diagonal() == (1, 4)
    assert m.row_sums() == (3, 7)
    assert m.col_sums() == (4, 6)
    assert m.column(1) == (2, 4)
    assert m.det() == -2


def test_matmul_and_matvec():
    m = RationalMatrix([[1, 2], [3, 4]])
    ident = RationalMatrix.identity(2)
    assert m @ ident == m
    assert (m @ m).rows == ((7, 10), (15, 22))
    assert m.matvec([1, 1]) == (3, 7)


def test_outer_and_submatrix():
    outer = RationalMatrix.outer([1, 2], [3, 4, 5])
    assert outer.rows == ((3, 4, 5), (6, 8, 10))
    sub = RationalMatrix([[1, 2, 3], [4, 5, 6], [7, 8, 9]]).submatrix([0, 2], [1, 2])
    assert sub.rows == ((2, 3), (8, 9))


def test_inverse_known():
    m = RationalMatrix([[2, 1], [3, 3]])
    assert m.inverse() == RationalMatrix([[1, Fraction(-1, 3)], [-1, Fraction(2, 3)]])


def test_inverse_singular():
    with pytest.raises(SingularMatrixError):
        RationalMatrix([[2, 2], [2, 2]]).inverse()
    with pytest.raises(SingularMatrixError):
        RationalMatrix([[1, 2, 3], [4, 5, 6], [5, 7, 9]]).inverse()


@pytest.mark.parametrize("seed", range(12))
def test_inverse_matches_gauss_jordan(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 7)
    m = random_rational_matrix(rng, n)
    expected = gauss_jordan_inverse([list(row) for row in m.rows])
    if expected is None:
        with pytest.raises(SingularMatrixError):
            m.inverse()
        return
    inv = m.inverse()
    assert inv == RationalMatrix(expected)
    assert m @ inv == RationalMatrix.identity(n)
    assert inv @ m == RationalMatrix.identity(n)


def test_det_matches_cofactor_expansion():
    def cofactor_det(rows):
        n = len(rows)
        if n == 1:
            return rows[0][0]
        total = Fraction(0)
        for j in range(n):
            minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
            total += (-1) ** j * rows[0][j] * cofactor_det(minor)
        return total

    rng = random.Random(99)
    for _ in range(6):
        n = rng.randint(1, 5)
        m = random_rational_matrix(rng, n)
        assert m.det() == cofactor_det([list(row) for row in m.rows])


@pytest.mark.parametrize("kernel", KERNELS, ids=lambda k: k.BACKEND)
@pytest.mark.parametrize("seed", range(8))
def test_kernel_inverse_scaled(kernel, seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    a = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
    result = kernel.inverse_scaled([row[:] for row in a])
    expected = gauss_jordan_inverse([[Fraction(x) for x in row] for row in a])
    if expected is None:
        assert result is None
        return
    det, adj = result
    assert det != 0
    assert [[Fraction(x, det) for x in row] for row in adj] == expected


@pytest.mark.parametrize("kernel", KERNELS, ids=lambda k: k.BACKEND)
def test_kernel_matmul_int(kernel):
    a = [[1, 2], [3, 4]]
    b = [[5, 6], [7, 8]]
    assert kernel.matmul_int(a, b) == [[19, 22], [43, 50]]
    assert kernel.matmul_int([], []) == []


@pytest.mark.skipif(_kernels_c is None, reason="compiled kernel not built")
@pytest.mark.parametrize("seed", range(6))
def test_backends_agree(seed):
    rng = random.Random(1000 + seed)
    n = rng.randint(1, 8)
    a = [[rng.randint(-20, 20) for _ in range(n)] for _ in range(n)]
    assert _kernels_py.inverse_scaled([r[:] for r in a]) == _kernels_c.inverse_scaled(
        [r[:] for r in a]
    )


def test_zero_multiplier_rows_not_skipped():
    # A pivot column with zeros elsewhere must still recombine every row:
    # the Bareiss sweep divides by the previous pivot unconditionally.
    m = RationalMatrix([[2, 0, 1], [0, 3, 0], [1, 0, 2]])
    inv = m.inverse()
    assert m @ inv == RationalMatrix.identity(3)


def test_empty_matrix_kernel():
    assert _kernels_py.inverse_scaled([]) == (1, [])
