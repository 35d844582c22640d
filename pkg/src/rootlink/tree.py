"""Dyadic trees with ordered minus/plus children and a fixed last leaf.

Every internal node has exactly two children, called the minus and the plus
child.  The in-order traversal (minus subtree, node, plus subtree) induces the
leaf order used to index matrices built on the tree.  The *fixed leaf* is the
rightmost leaf: the one reached from the root by always descending into plus
children.  The chain of nodes from the root to the fixed leaf is the spine.

Trees are immutable after construction; all queries are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence

from .errors import (
    FixedLeafNotRightmostError,
    MalformedTreeError,
    UnknownNodeError,
)

__all__ = ["TreeEdge", "DyadicTree", "build_tree"]


@dataclass(frozen=True, order=True)
class TreeEdge:
    """A tree edge oriented parent -> child."""

    parent: str
    child: str

    def __repr__(self) -> str:
        return f"({self.parent}->{self.child})"


class DyadicTree:
    """Rooted tree in which every internal node has a minus and a plus child.

    Construct through :func:`build_tree`, which validates the shape.
    """

    __slots__ = (
        "root",
        "fixed_leaf",
        "preorder",
        "leaf_order",
        "_children",
        "_parent",
        "_depth",
        "_leaf_pos",
        "_pre_pos",
        "_subtree_leaves",
    )

    def __init__(
        self,
        children: Mapping[str, tuple[str, str]],
        root: str,
        parent: Mapping[str, str],
        depth: Mapping[str, int],
        preorder: tuple[str, ...],
        leaf_order: tuple[str, ...],
    ):
        self.root = root
        self._children = dict(children)
        self._parent = dict(parent)
        self._depth = dict(depth)
        self.preorder = preorder
        self.leaf_order = leaf_order
        self.fixed_leaf = leaf_order[-1]
        self._leaf_pos = {leaf: i for i, leaf in enumerate(leaf_order)}
        self._pre_pos = {node: i for i, node in enumerate(preorder)}
        # leaf span per node, in leaf order: node -> (first, last+1)
        spans: dict[str, tuple[int, int]] = {}
        for node in reversed(preorder):
            kids = self._children.get(node)
            if kids:
                spans[node] = (spans[kids[0]][0], spans[kids[1]][1])
            else:
                pos = self._leaf_pos[node]
                spans[node] = (pos, pos + 1)
        self._subtree_leaves = spans

    # -- basic queries ---------------------------------------------------

    def __contains__(self, node: str) -> bool:
        return node in self._depth

    def __len__(self) -> int:
        return len(self.preorder)

    def _check(self, node: str) -> None:
        if node not in self._depth:
            raise UnknownNodeError(node)

    def is_leaf(self, node: str) -> bool:
        self._check(node)
        return node not in self._children

    def children(self, node: str) -> tuple[str, ...]:
        """(minus, plus) for internal nodes, () for leaves."""
        self._check(node)
        return self._children.get(node, ())

    def minus(self, node: str) -> str:
        return self.children(node)[0]

    def plus(self, node: str) -> str:
        return self.children(node)[1]

    def parent(self, node: str) -> Optional[str]:
        self._check(node)
        return self._parent.get(node)

    def depth(self, node: str) -> int:
        self._check(node)
        return self._depth[node]

    def internal_nodes(self) -> tuple[str, ...]:
        return tuple(n for n in self.preorder if n in self._children)

    def leaf_index(self, leaf: str) -> int:
        self._check(leaf)
        try:
            return self._leaf_pos[leaf]
        except KeyError:
            raise UnknownNodeError(f"{leaf} is not a leaf") from None

    # -- ancestry --------------------------------------------------------

    def ancestors(self, node: str) -> Iterator[str]:
        """node, parent(node), ..., root."""
        self._check(node)
        cur: Optional[str] = node
        while cur is not None:
            yield cur
            cur = self._parent.get(cur)

    def is_ancestor(self, anc: str, node: str) -> bool:
        """True when ``anc`` lies on the path from the root to ``node`` (inclusive)."""
        alo, ahi = self.leaf_span(anc)
        nlo, nhi = self.leaf_span(node)
        return alo <= nlo and nhi <= ahi

    def lca(self, a: str, b: str) -> str:
        """Deepest common ancestor of two nodes."""
        self._check(a)
        self._check(b)
        da, db = self._depth[a], self._depth[b]
        while da > db:
            a = self._parent[a]
            da -= 1
        while db > da:
            b = self._parent[b]
            db -= 1
        while a != b:
            a = self._parent[a]
            b = self._parent[b]
        return a

    def path_down(self, anc: str, node: str) -> tuple[str, ...]:
        """Nodes from ``anc`` down to ``node`` (both inclusive)."""
        if not self.is_ancestor(anc, node):
            raise UnknownNodeError(f"{anc} is not an ancestor of {node}")
        up = []
        cur = node
        while cur != anc:
            up.append(cur)
            cur = self._parent[cur]
        up.append(anc)
        return tuple(reversed(up))

    def geodesic_edges(self, a: str, b: str) -> frozenset[TreeEdge]:
        """Edges of the unique path between two nodes, each oriented parent -> child."""
        top = self.lca(a, b)
        edges = []
        for end in (a, b):
            cur = end
            while cur != top:
                par = self._parent[cur]
                edges.append(TreeEdge(par, cur))
                cur = par
        return frozenset(edges)

    # -- leaves and spine --------------------------------------------------

    def leaves_below(self, node: str) -> tuple[str, ...]:
        """Leaves of the subtree rooted at ``node``, in leaf order."""
        lo, hi = self.leaf_span(node)
        return self.leaf_order[lo:hi]

    def leaf_span(self, node: str) -> tuple[int, int]:
        """Half-open range of leaf positions covered by ``node``'s subtree."""
        self._check(node)
        return self._subtree_leaves[node]

    def spine(self) -> tuple[str, ...]:
        """Nodes from the root to the fixed leaf (always via plus children)."""
        out = [self.root]
        while out[-1] in self._children:
            out.append(self._children[out[-1]][1])
        return tuple(out)

    def on_spine(self, node: str) -> bool:
        """True when ``node`` lies on the root-to-fixed-leaf path."""
        lo, hi = self.leaf_span(node)
        return hi == len(self.leaf_order)

    def spine_anchor(self, node: str) -> str:
        """Deepest spine node that is an ancestor of ``node`` (= lca with the fixed leaf)."""
        return self.lca(node, self.fixed_leaf)

    def edge_key(self, edge: TreeEdge) -> tuple[int, int]:
        """Deterministic sort key: preorder position of parent, minus before plus."""
        kids = self.children(edge.parent)
        return (self._pre_pos[edge.parent], kids.index(edge.child))

    def subtree_children(self, node: str) -> dict[str, tuple[str, str]]:
        """Child mapping of the subtree rooted at ``node`` (for rebuilding)."""
        self._check(node)
        out = {}
        stack = [node]
        while stack:
            cur = stack.pop()
            kids = self._children.get(cur)
            if kids:
                out[cur] = kids
                stack.extend(kids)
        return out

    def __repr__(self) -> str:
        return (
            f"DyadicTree(root={self.root!r}, leaves={len(self.leaf_order)}, "
            f"fixed_leaf={self.fixed_leaf!r})"
        )


def build_tree(
    children: Mapping[str, Sequence[str]],
    root: str,
    fixed_leaf: Optional[str] = None,
) -> DyadicTree:
    """Build and validate a dyadic tree.

    ``children`` maps each internal node id to its (minus, plus) child pair;
    ids that never appear as keys are leaves.  ``fixed_leaf``, when given,
    must be the rightmost leaf (the all-plus descent from the root); it
    defaults to the rightmost leaf.

    Raises :class:`MalformedTreeError` for duplicate children, cycles,
    unreachable nodes or non-binary nodes, and
    :class:`FixedLeafNotRightmostError` when ``fixed_leaf`` is wrong.
    """
    normalized: dict[str, tuple[str, str]] = {}
    for node, kids in children.items():
        kids = tuple(kids)
        if len(kids) != 2 or any(k is None for k in kids):
            raise MalformedTreeError(
                f"node {node!r} must have exactly a minus and a plus child, got {kids!r}"
            )
        if kids[0] == kids[1]:
            raise MalformedTreeError(f"node {node!r} lists the same child twice")
        normalized[node] = (str(kids[0]), str(kids[1]))

    seen_child: dict[str, str] = {}
    for node, kids in normalized.items():
        for kid in kids:
            if kid in seen_child:
                raise MalformedTreeError(
                    f"node {kid!r} has two parents ({seen_child[kid]!r} and {node!r})"
                )
            seen_child[kid] = node
    if root in seen_child:
        raise MalformedTreeError(f"root {root!r} appears as a child")
    if root not in normalized and seen_child:
        raise MalformedTreeError(f"root {root!r} is a leaf but other nodes exist")

    # Each node now has at most one parent and the root has none, so the walk
    # below terminates; anything it never reaches is flagged afterwards.
    parent: dict[str, str] = {}
    depth: dict[str, int] = {root: 0}
    preorder: list[str] = []
    leaf_order: list[str] = []
    stack = [root]
    while stack:
        node = stack.pop()
        preorder.append(node)
        kids = normalized.get(node)
        if kids is None:
            leaf_order.append(node)
            continue
        minus, plus = kids
        parent[minus] = node
        parent[plus] = node
        depth[minus] = depth[node] + 1
        depth[plus] = depth[node] + 1
        stack.append(plus)  # visited after the whole minus subtree
        stack.append(minus)

    missing = set(normalized) - set(preorder)
    if missing:
        raise MalformedTreeError(
            f"internal nodes unreachable from root: {sorted(missing)}"
        )

    rightmost = leaf_order[-1]
    if fixed_leaf is not None and fixed_leaf != rightmost:
        if fixed_leaf not in depth:
            raise UnknownNodeError(fixed_leaf)
        raise FixedLeafNotRightmostError(
            f"fixed leaf {fixed_leaf!r} is not the rightmost leaf {rightmost!r}"
        )

    return DyadicTree(
        normalized, root, parent, depth, tuple(preorder), tuple(leaf_order)
    )
