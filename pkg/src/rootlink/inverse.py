"""Exact inversion reports: potentials, root-split block formulas, kernels.

The elimination-based :meth:`RationalMatrix.inverse` is the ground truth;
the closed-form block decomposition at the root split and the mass
recursion are verification layers cross-checked against it.  The
transition kernel ``P = I - (1/eta) * inverse`` and its Neumann partial
sums round out the probabilistic reading of the inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .build import TreeMatrix
from .errors import (
    EtaTooSmallError,
    SingularMatrixError,
    TheoremMismatchError,
)
from .matrix import Rational, RationalMatrix, to_fraction

__all__ = [
    "PotentialReport",
    "potentials",
    "exact_inverse",
    "RestrictionCache",
    "SchurBlocks",
    "schur_blocks",
    "MassRecursionReport",
    "verify_mass_recursion",
    "TransitionKernel",
    "transition_kernel",
    "NeumannReport",
    "neumann_check",
]


@dataclass(frozen=True)
class PotentialReport:
    """Row-sum and column-sum potentials of an inverse matrix."""

    mu: tuple[Fraction, ...]  # row sums
    nu: tuple[Fraction, ...]  # column sums
    mu_bar: Fraction  # total mass (sum of all entries)

    @property
    def nu_bar(self) -> Fraction:
        """Total of the column sums; always equals :attr:`mu_bar`."""
        return self.mu_bar


def potentials(minv: RationalMatrix) -> PotentialReport:
    """Potentials of an (already inverted) matrix: mu rows, nu columns."""
    mu = minv.row_sums()
    nu = minv.col_sums()
    return PotentialReport(mu, nu, sum(mu, Fraction(0)))


def exact_inverse(m: RationalMatrix) -> RationalMatrix:
    """Exact inverse by fraction-free elimination (the oracle for all checks)."""
    return m.inverse()


class RestrictionCache:
    """Memoized restrictions, inverses and potentials per tree node.

    Root, exit and link analyses all consult sub-block inverses repeatedly;
    one cache per instance keeps that from going quadratic in practice.
    """

    __slots__ = ("tm", "_restricted", "_inverse", "_potential")

    def __init__(self, tm: TreeMatrix):
        self.tm = tm
        self._restricted: dict[str, TreeMatrix] = {tm.tree.root: tm}
        self._inverse: dict[str, RationalMatrix] = {}
        self._potential: dict[str, PotentialReport] = {}

    def restricted(self, node: str) -> TreeMatrix:
        try:
            return self._restricted[node]
        except KeyError:
            sub = self.tm.restrict(node)
            self._restricted[node] = sub
            return sub

    def inverse(self, node: str) -> RationalMatrix:
        try:
            return self._inverse[node]
        except KeyError:
            pass
        try:
            inv = self.restricted(node).matrix.inverse()
        except SingularMatrixError:
            raise SingularMatrixError(
                f"restriction at node {node!r} is singular"
            ) from None
        self._inverse[node] = inv
        return inv

    def potential(self, node: str) -> PotentialReport:
        try:
            return self._potential[node]
        except KeyError:
            report = potentials(self.inverse(node))
            self._potential[node] = report
            return report

    def mass(self, node: str) -> Fraction:
        return self.potential(node).mu_bar


@dataclass(frozen=True)
class SchurBlocks:
    """Closed-form inverse blocks at the root's minus/plus split."""

    top_left: RationalMatrix
    top_right: RationalMatrix
    bottom_left: RationalMatrix
    bottom_right: RationalMatrix
    alpha_root: Fraction
    mu_minus: tuple[Fraction, ...]
    nu_minus: tuple[Fraction, ...]
    nu_plus: tuple[Fraction, ...]
    mass_minus: Fraction
    denom: Fraction  # 1 - alpha_root * mass_minus

    def assemble(self) -> RationalMatrix:
        rows = []
        for left, right in zip(self.top_left.rows, self.top_right.rows):
            rows.append(list(left) + list(right))
        for left, right in zip(self.bottom_left.rows, self.bottom_right.rows):
            rows.append(list(left) + list(right))
        return RationalMatrix(rows)


def schur_blocks(tm: TreeMatrix, cache: Optional[RestrictionCache] = None) -> SchurBlocks:
    """Compute the four inverse blocks at the root split and verify them.

    The assembled blocks are compared entry-for-entry against the
    elimination inverse; a difference raises
    :class:`TheoremMismatchError`, as does a nonpositive denominator on a
    nonsingular matrix.
    """
    tree = tm.tree
    if tree.is_leaf(tree.root):
        raise ValueError("root split requires at least 2 leaves")
    cache = cache or RestrictionCache(tm)
    full_inverse = cache.inverse(tree.root)

    minus, plus = tree.children(tree.root)
    inv_minus = cache.inverse(minus)
    inv_plus = cache.inverse(plus)
    pot_minus = cache.potential(minus)
    pot_plus = cache.potential(plus)
    alpha_root = tm.alpha(tree.root)
    mass_minus = pot_minus.mu_bar
    denom = 1 - alpha_root * mass_minus
    if denom == 0:
        raise SingularMatrixError("root-split denominator is zero")
    if denom < 0:
        raise TheoremMismatchError(
            f"root-split denominator {denom} is negative on a nonsingular matrix"
        )

    size_plus = inv_plus.nrows
    e_last = [Fraction(0)] * size_plus
    e_last[-1] = Fraction(1)

    top_left = inv_minus + RationalMatrix.outer(
        pot_minus.mu, pot_minus.nu
    ).scale(alpha_root / denom)
    top_right = RationalMatrix.outer(pot_minus.mu, pot_plus.nu).scale(
        -alpha_root / denom
    )
    bottom_left = RationalMatrix.outer(e_last, pot_minus.nu).scale(
        Fraction(-1) / denom
    )
    bottom_right = inv_plus + RationalMatrix.outer(e_last, pot_plus.nu).scale(
        alpha_root * mass_minus / denom
    )

    blocks = SchurBlocks(
        top_left,
        top_right,
        bottom_left,
        bottom_right,
        alpha_root,
        pot_minus.mu,
        pot_minus.nu,
        pot_plus.nu,
        mass_minus,
        denom,
    )
    if blocks.assemble() != full_inverse:
        raise TheoremMismatchError(
            "assembled root-split blocks differ from the elimination inverse"
        )
    return blocks


@dataclass(frozen=True)
class MassRecursionReport:
    """Result of checking the mass/potential recursion at the root split."""

    ok: bool
    factor: Fraction  # (1 - alpha_root * mass_plus) / (1 - alpha_root * mass_minus)
    mass_total: Fraction
    messages: tuple[str, ...]


def verify_mass_recursion(
    tm: TreeMatrix, cache: Optional[RestrictionCache] = None
) -> MassRecursionReport:
    """Check the exact recursion tying the full potentials to the split blocks.

    Verifies that the full row-sum potential equals the minus-side potential
    scaled by ``(1 - alpha_root*mass_plus)/(1 - alpha_root*mass_minus)``
    stacked over the plus-side potential with a correction at the fixed
    leaf, and that the total mass equals both the plus side's mass and the
    reciprocal of the fixed leaf's diagonal entry.
    """
    tree = tm.tree
    if tree.is_leaf(tree.root):
        raise ValueError("mass recursion requires at least 2 leaves")
    cache = cache or RestrictionCache(tm)
    full = cache.potential(tree.root)
    minus, plus = tree.children(tree.root)
    pot_minus = cache.potential(minus)
    pot_plus = cache.potential(plus)
    alpha_root = tm.alpha(tree.root)
    denom = 1 - alpha_root * pot_minus.mu_bar
    if denom == 0:
        raise SingularMatrixError("root-split denominator is zero")
    factor = (1 - alpha_root * pot_plus.mu_bar) / denom

    messages = []
    expected_top = tuple(factor * x for x in pot_minus.mu)
    size_minus = len(pot_minus.mu)
    actual_top = full.mu[:size_minus]
    if actual_top != expected_top:
        messages.append(
            f"minus-side potential mismatch: {actual_top} != {expected_top}"
        )
    correction = pot_minus.mu_bar * factor
    expected_bottom = list(pot_plus.mu)
    expected_bottom[-1] -= correction
    if list(full.mu[size_minus:]) != expected_bottom:
        messages.append(
            f"plus-side potential mismatch: {full.mu[size_minus:]} != "
            f"{tuple(expected_bottom)}"
        )
    if full.mu_bar != pot_plus.mu_bar:
        messages.append(
            f"total mass {full.mu_bar} != plus-side mass {pot_plus.mu_bar}"
        )
    last = tm.matrix[-1, -1]
    if last == 0 or full.mu_bar != 1 / last:
        messages.append(
            f"total mass {full.mu_bar} != reciprocal of last diagonal {last}"
        )
    return MassRecursionReport(not messages, factor, full.mu_bar, tuple(messages))


@dataclass(frozen=True)
class TransitionKernel:
    """Sub-Markov kernel derived from an inverse matrix and a scale eta."""

    p: RationalMatrix
    eta: Fraction
    eta_min: Fraction  # largest diagonal entry of the inverse


def transition_kernel(
    minv: RationalMatrix, eta: Optional[Rational] = None
) -> TransitionKernel:
    """Build ``P = I - (1/eta)*minv`` and check it is sub-Markov.

    ``eta`` defaults to the largest diagonal entry of ``minv`` (the smallest
    admissible value).  A smaller eta drives a diagonal entry of P negative
    and raises :class:`EtaTooSmallError`.  Off-diagonal negativity or a
    column sum above one means ``minv`` is not the inverse of a supported
    matrix and raises :class:`ValueError`.
    """
    if minv.nrows != minv.ncols:
        raise ValueError(f"matrix is not square: {minv.shape}")
    eta_min = max(minv.diagonal())
    eta_val = eta_min if eta is None else to_fraction(eta)
    if eta_val <= 0:
        raise EtaTooSmallError(f"eta must be positive, got {eta_val}")
    n = minv.nrows
    p = RationalMatrix.identity(n) - minv.scale(Fraction(1) / eta_val)
    for i in range(n):
        if p[i, i] < 0:
            raise EtaTooSmallError(
                f"eta {eta_val} below the largest inverse diagonal {eta_min}"
            )
    for i in range(n):
        for j in range(n):
            if i != j and p[i, j] < 0:
                raise ValueError(
                    "off-diagonal of the kernel is negative; input is not the "
                    "inverse of a supported matrix"
                )
    for j, total in enumerate(p.col_sums()):
        if total > 1:
            raise ValueError(
                f"kernel column {j} sums to {total} > 1; input is not the "
                "inverse of a supported matrix"
            )
    return TransitionKernel(p, eta_val, eta_min)


@dataclass(frozen=True)
class NeumannReport:
    """Exact partial-sum checks plus float gap diagnostics."""

    steps: int
    gaps: tuple[float, ...]  # largest entry of eta*U - S_M, M = 0..steps
    monotone_ok: bool
    bounded_ok: bool
    identity_ok: bool
    messages: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.monotone_ok and self.bounded_ok and self.identity_ok


def _max_entry(m: RationalMatrix) -> Fraction:
    return max(x for row in m.rows for x in row)


def neumann_check(
    tm: TreeMatrix, kernel: TransitionKernel, steps: int
) -> NeumannReport:
    """Verify the Neumann partial sums of the kernel against ``eta*U``.

    Exactly checks, for M = 0..steps, that the partial sums
    ``S_M = I + P + ... + P^M`` grow monotonically, stay entrywise below
    ``eta*U``, and satisfy ``eta*U - S_M = P^(M+1) @ (eta*U)``.  Gap sizes
    (largest entry of the remainder) are reported as floats per M, purely
    as a convergence diagnostic.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    target = tm.matrix.scale(kernel.eta)
    n = target.nrows
    power = RationalMatrix.identity(n)  # P^M
    partial = RationalMatrix.identity(n)  # S_M
    monotone_ok = bounded_ok = identity_ok = True
    messages: list[str] = []
    gaps: list[float] = []
    for m in range(steps + 1):
        remainder = target - partial
        if any(x < 0 for row in remainder.rows for x in row):
            bounded_ok = False
            messages.append(f"partial sum exceeds eta*U at M={m}")
        power = power @ kernel.p  # P^(M+1)
        if remainder != power @ target:
            identity_ok = False
            messages.append(f"remainder identity fails at M={m}")
        gaps.append(float(_max_entry(remainder)))
        increment = power  # P^(M+1) >= 0 drives S_(M+1) >= S_M
        if any(x < 0 for row in increment.rows for x in row):
            monotone_ok = False
            messages.append(f"partial sums not monotone at M={m}")
        partial = partial + increment
    return NeumannReport(
        steps, tuple(gaps), monotone_ok, bounded_ok, identity_ok, tuple(messages)
    )
