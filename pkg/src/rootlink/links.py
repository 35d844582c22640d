"""Structural prediction of negative inverse entries ("links").

For leaves ``i != j`` meeting at node ``L``, whether the inverse entry
``(U^-1)_ij`` is strictly negative is decided combinatorially:

* ``L`` on the spine: the upper entry links exactly when the row leaf is a
  structural root of the minus side, the column leaf is the fixed leaf, and
  the meeting value is positive; the lower entry links exactly when the row
  leaf is the fixed leaf and the column leaf is a transpose root of the
  minus side.
* ``L`` off the spine: the row leaf must be a structural root of its side's
  restriction and the column leaf a transpose root of the other side's
  restriction; then the entry value ``U_ij`` is filtered against every
  ancestor of ``L`` strictly below the spine anchor (ties survive only when
  the ancestor's beta value is not attained by a leaf on the opposite
  side), and finally must strictly exceed the spine anchor's alpha.

Every verdict carries a trace naming the rule that decided it; the oracle
(the exact inverse) adjudicates disagreements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .build import Annotation, TreeMatrix, validate_annotation
from .errors import InvalidAnnotationError
from .matrix import RationalMatrix
from .roots import StructureSets, build_structure_sets, roots_structural, roots_transpose
from .tree import DyadicTree, TreeEdge

__all__ = [
    "link_oracle",
    "LinkTrace",
    "link_structural",
    "LinkReport",
    "link_matrix",
    "BlockPattern",
    "zero_pattern",
]


def link_oracle(minv: RationalMatrix, i: int, j: int) -> bool:
    """Ground truth: is the inverse entry at positions (i, j) negative?"""
    if i == j:
        raise ValueError("links are defined for distinct leaves only")
    return minv[i, j] < 0


@dataclass(frozen=True)
class LinkTrace:
    """Structural verdict for one ordered leaf pair, with its derivation."""

    row: str
    col: str
    meet: str  # lowest common ancestor of the pair
    anchor: str  # deepest spine ancestor of the meet
    entry: Fraction  # the matrix entry at (row, col)
    rule: str  # the clause that decided the verdict
    linked: bool
    steps: tuple[str, ...]


class _SideRoots:
    """Memoized structural root / transpose-root sets per node."""

    def __init__(self, tm: TreeMatrix, sets: StructureSets):
        self.tm = tm
        self.sets = sets
        self._roots: dict[str, frozenset[str]] = {}
        self._roots_t: dict[str, frozenset[str]] = {}

    def roots(self, node: str) -> frozenset[str]:
        try:
            return self._roots[node]
        except KeyError:
            result = roots_structural(self.tm, self.sets, node).roots
            self._roots[node] = result
            return result

    def roots_t(self, node: str) -> frozenset[str]:
        try:
            return self._roots_t[node]
        except KeyError:
            result = roots_transpose(self.tm.tree, self.sets, node)
            self._roots_t[node] = result
            return result


def link_structural(
    tm: TreeMatrix,
    sets: StructureSets,
    row: str,
    col: str,
    side_roots: Optional[_SideRoots] = None,
) -> LinkTrace:
    """Predict whether the inverse entry at (row, col) is negative.

    ``row`` and ``col`` are distinct leaf ids.  Only used on nonsingular
    matrices; the off-spine branch never needs the fixed-leaf exit test
    because side restrictions of an off-spine meet are off the spine
    themselves.
    """
    tree = tm.tree
    if row == col:
        raise ValueError("links are defined for distinct leaves only")
    side_roots = side_roots or _SideRoots(tm, sets)
    meet = tree.lca(row, col)
    anchor = tree.spine_anchor(meet)
    minus, plus = tree.children(meet)
    upper = tree.leaf_index(row) < tree.leaf_index(col)
    entry = tm.matrix[tree.leaf_index(row), tree.leaf_index(col)]
    steps: list[str] = []

    def done(rule: str, linked: bool) -> LinkTrace:
        return LinkTrace(
            row, col, meet, anchor, entry, rule, linked, tuple(steps)
        )

    if tree.on_spine(meet):
        if upper:
            alpha = tm.alpha(meet)
            if alpha == 0:
                steps.append(f"meet value alpha({meet}) = 0")
                return done("(i.a)", False)
            if col != tree.fixed_leaf:
                steps.append(f"column {col} is not the fixed leaf")
                return done("(i.a)", False)
            ok = row in side_roots.roots(minus)
            steps.append(
                f"row {row} {'is' if ok else 'is not'} a root of side {minus}"
            )
            return done("(i.a)", ok)
        if row != tree.fixed_leaf:
            steps.append(f"row {row} is not the fixed leaf")
            return done("(i.b)", False)
        ok = col in side_roots.roots_t(minus)
        steps.append(
            f"column {col} {'is' if ok else 'is not'} a transpose root of side {minus}"
        )
        return done("(i.b)", ok)

    row_side, col_side = (minus, plus) if upper else (plus, minus)
    if row not in side_roots.roots(row_side):
        steps.append(f"row {row} is not a root of side {row_side}")
        return done("(ii.a)", False)
    if col not in side_roots.roots_t(col_side):
        steps.append(f"column {col} is not a transpose root of side {col_side}")
        return done("(ii.a)", False)
    steps.append(f"(ii.a) holds at {meet}")

    # Climb the ancestors strictly between the meet and its spine anchor.
    prev = meet
    node = tree.parent(meet)
    while node != anchor:
        alpha = tm.alpha(node)
        if entry > alpha:
            prev, node = node, tree.parent(node)
            continue
        if entry < alpha:  # impossible for valid annotations; defensive
            steps.append(f"entry {entry} below alpha({node}) = {alpha}")
            return done("(ii.b)", False)
        node_minus, node_plus = tree.children(node)
        if prev == node_minus:
            blocked = TreeEdge(node, node_minus) in sets.gamma_t
            side = "minus"
        else:
            blocked = TreeEdge(node, node_plus) in sets.gamma
            side = "plus"
        if blocked:
            steps.append(
                f"tie at {node} ({side} side): beta attained on the opposite side"
            )
            return done("(ii.b)", False)
        steps.append(f"tie at {node} ({side} side) survives")
        prev, node = node, tree.parent(node)

    threshold = tm.alpha(anchor)
    ok = entry > threshold
    steps.append(
        f"entry {entry} {'>' if ok else '<='} alpha({anchor}) = {threshold}"
    )
    return done("(ii.c)", ok)


@dataclass(frozen=True)
class LinkReport:
    """All-pairs structural verdicts with oracle cross-check."""

    links: frozenset[tuple[str, str]]
    oracle_links: frozenset[tuple[str, str]]
    traces: tuple[LinkTrace, ...]
    mismatches: tuple[LinkTrace, ...]

    @property
    def agrees(self) -> bool:
        return not self.mismatches


def link_matrix(
    tm: TreeMatrix,
    sets: Optional[StructureSets] = None,
    minv: Optional[RationalMatrix] = None,
) -> LinkReport:
    """Evaluate every ordered leaf pair structurally and against the oracle."""
    sets = sets or build_structure_sets(tm.tree, tm.annotation)
    minv = minv if minv is not None else tm.matrix.inverse()
    side_roots = _SideRoots(tm, sets)
    leaves = tm.leaves
    links = set()
    oracle_links = set()
    traces = []
    mismatches = []
    for i, row in enumerate(leaves):
        for j, col in enumerate(leaves):
            if i == j:
                continue
            trace = link_structural(tm, sets, row, col, side_roots)
            truth = link_oracle(minv, i, j)
            traces.append(trace)
            if trace.linked:
                links.add((row, col))
            if truth:
                oracle_links.add((row, col))
            if trace.linked != truth:
                mismatches.append(trace)
    return LinkReport(
        frozenset(links),
        frozenset(oracle_links),
        tuple(traces),
        tuple(mismatches),
    )


@dataclass(frozen=True)
class BlockPattern:
    """Predicted coarse structure of the inverse in leaf-block coordinates.

    Blocks are the minus-side leaf groups of successive spine nodes plus the
    final singleton holding the fixed leaf.  Off-diagonal block pairs not
    involving the last block are always zero in the inverse; diagonal blocks
    other than the first and last are lower triangular.  Under strictness
    hypotheses (beta strictly increasing into off-spine children, alpha
    strictly increasing into the root's minus child), the first diagonal
    block, the last block row, and the strict lower parts of the middle
    diagonal blocks are fully nonzero.  Last-column entries are nonzero per
    block only when the block's spine node has positive alpha; blocks whose
    spine alpha is zero contribute exact zeros there, so those positions are
    excluded from the nonzero prediction rather than guarded by a hypothesis.
    """

    blocks: tuple[tuple[str, ...], ...]
    predicted_zero_pairs: frozenset[tuple[int, int]]  # 0-based block pairs
    triangular_blocks: tuple[int, ...]  # 0-based middle diagonal blocks
    hypotheses_hold: bool
    hypothesis_failures: tuple[str, ...]
    predicted_zero_positions: frozenset[tuple[int, int]]  # leaf positions
    triangular_zero_positions: frozenset[tuple[int, int]]
    predicted_nonzero_positions: frozenset[tuple[int, int]]

    @property
    def block_count(self) -> int:
        return len(self.blocks)


def zero_pattern(tree: DyadicTree, annotation: Annotation) -> BlockPattern:
    """Derive the block zero/nonzero pattern of the inverse from the tree."""
    violations = validate_annotation(tree, annotation)
    if violations:
        raise InvalidAnnotationError(violations)

    blocks: list[tuple[str, ...]] = []
    for node in tree.spine()[:-1]:
        blocks.append(tree.leaves_below(tree.minus(node)))
    blocks.append((tree.fixed_leaf,))
    s = len(blocks)
    positions = [tuple(tree.leaf_index(leaf) for leaf in block) for block in blocks]

    zero_pairs = frozenset(
        (p, q)
        for p in range(s)
        for q in range(s)
        if p != q and p != s - 1 and q != s - 1
    )
    zero_positions = frozenset(
        (i, j)
        for p, q in zero_pairs
        for i in positions[p]
        for j in positions[q]
    )
    triangular = tuple(range(1, s - 1))
    triangular_zeros = set()
    for b in triangular:
        block = positions[b]
        for i in range(len(block)):
            for j in range(i + 1, len(block)):
                triangular_zeros.add((block[i], block[j]))

    failures = []
    spine = set(tree.spine())
    for node in tree.internal_nodes():
        for child in tree.children(node):
            if child in spine:
                continue
            if annotation.beta(child) <= annotation.beta(node):
                failures.append(
                    f"beta({child}) = {annotation.beta(child)} does not exceed "
                    f"beta({node}) = {annotation.beta(node)}"
                )
    if not tree.is_leaf(tree.root):
        root_minus = tree.minus(tree.root)
        if annotation.alpha(root_minus) <= annotation.alpha(tree.root):
            failures.append(
                f"alpha({root_minus}) = {annotation.alpha(root_minus)} does not "
                f"exceed alpha({tree.root}) = {annotation.alpha(tree.root)}"
            )

    # The final column needs one refinement over the block picture: an
    # entry (i, n) is a link through the spine node above i's block, and
    # that rule carries an alpha > 0 guard.  A block whose spine node has
    # alpha = 0 therefore contributes exact zeros to the last column even
    # when every strictness hypothesis holds (alpha is monotone down the
    # spine, so such blocks form a prefix).
    nonzero: set[tuple[int, int]] = set()
    first = positions[0]
    last = positions[-1]
    for i in first:
        for j in first:
            nonzero.add((i, j))
    spine_nodes = tree.spine()[:-1]
    for b, block in enumerate(positions):
        for i in block:
            nonzero.add((last[0], i))
            if b == s - 1 or annotation.alpha(spine_nodes[b]) > 0:
                nonzero.add((i, last[0]))
    for b in triangular:
        block = positions[b]
        for i in range(len(block)):
            for j in range(i):
                nonzero.add((block[i], block[j]))

    return BlockPattern(
        tuple(blocks),
        zero_pairs,
        triangular,
        not failures,
        tuple(failures),
        zero_positions,
        frozenset(triangular_zeros),
        frozenset(nonzero),
    )
