"""Exact rational matrices backed by integer kernels.

:class:`RationalMatrix` stores :class:`~fractions.Fraction` entries in
immutable row tuples.  Inversion and multiplication clear denominators with
one LCM per matrix and run on the integer kernels, so results are exact and
the hot loops stay in :mod:`rootlink.kernels`.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator, Sequence, Union

from . import kernels
from .errors import SingularMatrixError

__all__ = ["Rational", "RationalMatrix", "to_fraction"]

Rational = Union[int, Fraction, str]


def to_fraction(value: Rational) -> Fraction:
    """Convert an int, Fraction or ``"p/q"`` string to an exact Fraction.

    Floats (and bools) are rejected: every quantity in this package is exact,
    and a float sneaking in would silently poison downstream comparisons.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"exact rational required, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"exact rational required, got {value!r}")


class RationalMatrix:
    """Immutable matrix of exact rationals."""

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[Rational]]):
        data = tuple(tuple(to_fraction(x) for x in row) for row in rows)
        if data and any(len(row) != len(data[0]) for row in data):
            raise ValueError("rows must all have the same length")
        self._rows = data
        self.nrows = len(data)
        self.ncols = len(data[0]) if data else 0

    # -- construction ------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RationalMatrix":
        return cls([[0] * ncols for _ in range(nrows)])

    @classmethod
    def outer(
        cls, u: Sequence[Rational], v: Sequence[Rational]
    ) -> "RationalMatrix":
        """Column times row: ``out[i][j] = u[i] * v[j]``."""
        uf = [to_fraction(x) for x in u]
        vf = [to_fraction(x) for x in v]
        return cls([[x * y for y in vf] for x in uf])

    # -- access ------------------------------------------------------------

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, key):
        if isinstance(key, tuple):
            i, j = key
            return self._rows[i][j]
        return self._rows[key]

    def __iter__(self) -> Iterator[tuple[Fraction, ...]]:
        return iter(self._rows)

    def __len__(self) -> int:
        return self.nrows

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RationalMatrix):
            return self._rows == other._rows
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = ", ".join(
            "[" + ", ".join(str(x) for x in row) + "]" for row in self._rows
        )
        return f"RationalMatrix([{body}])"

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self._rows)

    def diagonal(self) -> tuple[Fraction, ...]:
        return tuple(self._rows[i][i] for i in range(min(self.nrows, self.ncols)))

    def row_sums(self) -> tuple[Fraction, ...]:
        return tuple(sum(row, Fraction(0)) for row in self._rows)

    def col_sums(self) -> tuple[Fraction, ...]:
        return tuple(
            sum((row[j] for row in self._rows), Fraction(0))
            for j in range(self.ncols)
        )

    def submatrix(
        self, row_idx: Sequence[int], col_idx: Sequence[int]
    ) -> "RationalMatrix":
        return RationalMatrix(
            [[self._rows[i][j] for j in col_idx] for i in row_idx]
        )

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            [[self._rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
        )

    # -- arithmetic ----------------------------------------------------------

    def _binary(self, other: "RationalMatrix", op) -> "RationalMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")
        return RationalMatrix(
            [
                [op(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self._rows, other._rows)
            ]
        )

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self._binary(other, lambda a, b: a - b)

    def scale(self, c: Rational) -> "RationalMatrix":
        cf = to_fraction(c)
        return RationalMatrix([[cf * x for x in row] for row in self._rows])

    def __neg__(self) -> "RationalMatrix":
        return self.scale(-1)

    def _scaled_int(self) -> tuple[int, list[list[int]]]:
        """(L, M) with ``M = L * self`` integral and L the denominator LCM."""
        denom = 1
        for row in self._rows:
            for x in row:
                denom = lcm(denom, x.denominator)
        ints = [
            [int(x.numerator * (denom // x.denominator)) for x in row]
            for row in self._rows
        ]
        return denom, ints

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
        la, ma = self._scaled_int()
        lb, mb = other._scaled_int()
        prod = kernels.matmul_int(ma, mb)
        scale = la * lb
        return RationalMatrix(
            [[Fraction(x, scale) for x in row] for row in prod]
        )

    def matvec(self, v: Sequence[Rational]) -> tuple[Fraction, ...]:
        vf = [to_fraction(x) for x in v]
        if len(vf) != self.ncols:
            raise ValueError(f"shape mismatch: {self.shape} @ vector[{len(vf)}]")
        return tuple(
            sum((a * b for a, b in zip(row, vf)), Fraction(0))
            for row in self._rows
        )

    # -- linear algebra --------------------------------------------------------

    def inverse(self) -> "RationalMatrix":
        """Exact inverse; raises :class:`SingularMatrixError` when det = 0."""
        if self.nrows != self.ncols:
            raise ValueError(f"matrix is not square: {self.shape}")
        scale, ints = self._scaled_int()
        result = kernels.inverse_scaled(ints)
        if result is None:
            raise SingularMatrixError(
                f"matrix of order {self.nrows} is singular"
            )
        det, adj = result
        return RationalMatrix(
            [[Fraction(scale * x, det) for x in row] for row in adj]
        )

    def det(self) -> Fraction:
        """Exact determinant."""
        if self.nrows != self.ncols:
            raise ValueError(f"matrix is not square: {self.shape}")
        if self.nrows == 0:
            return Fraction(1)
        scale, ints = self._scaled_int()
        result = kernels.inverse_scaled(ints)
        if result is None:
            return Fraction(0)
        det, _ = result
        return Fraction(det, scale**self.nrows)
