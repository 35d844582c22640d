"""Dyadic tree construction, traversal orders, and geodesic queries."""

from __future__ import annotations

import pytest

from rootlink.errors import (
    FixedLeafNotRightmostError,
    MalformedTreeError,
    UnknownNodeError,
)
from rootlink.tree import TreeEdge, build_tree

from conftest import SIX_LEAF_CHILDREN


def test_orders(six_tree):
    assert six_tree.root == "I"
    assert six_tree.leaf_order == ("1", "2", "3", "4", "5", "6")
    assert six_tree.preorder == ("I", "A", "1", "2", "B", "C", "3", "4", "D", "5", "6")
    assert six_tree.internal_nodes() == ("I", "A", "B", "C", "D")
    assert len(six_tree) == 11


def test_children_and_parents(six_tree):
    assert six_tree.children("B") == ("C", "D")
    assert six_tree.minus("B") == "C"
    assert six_tree.plus("B") == "D"
    assert six_tree.parent("C") == "B"
    assert six_tree.parent("I") is None
    assert six_tree.is_leaf("4")
    assert not six_tree.is_leaf("C")
    assert six_tree.depth("I") == 0
    assert six_tree.depth("5") == 3
    assert "A" in six_tree and "Z" not in six_tree


def test_unknown_node_raises(six_tree):
    with pytest.raises(UnknownNodeError):
        six_tree.children("Z")
    with pytest.raises(UnknownNodeError):
        six_tree.leaf_index("A")  # internal node has no leaf position


def test_fixed_leaf_and_spine(six_tree):
    assert six_tree.fixed_leaf == "6"
    assert six_tree.spine() == ("I", "B", "D", "6")
    assert six_tree.on_spine("D") and six_tree.on_spine("6")
    assert not six_tree.on_spine("A") and not six_tree.on_spine("3")


@pytest.mark.parametrize(
    "node,anchor",
    [("I", "I"), ("A", "I"), ("1", "I"), ("C", "B"), ("4", "B"), ("5", "D"), ("6", "6")],
)
def test_spine_anchor(six_tree, node, anchor):
    assert six_tree.spine_anchor(node) == anchor


@pytest.mark.parametrize(
    "a,b,meet",
    [
        ("1", "2", "A"),
        ("1", "6", "I"),
        ("3", "4", "C"),
        ("3", "5", "B"),
        ("4", "D", "B"),
        ("5", "5", "5"),
        ("C", "B", "B"),
    ],
)
def test_lca(six_tree, a, b, meet):
    assert six_tree.lca(a, b) == meet


def test_ancestry(six_tree):
    assert six_tree.is_ancestor("B", "5")
    assert six_tree.is_ancestor("B", "B")
    assert not six_tree.is_ancestor("A", "5")
    assert list(six_tree.ancestors("4")) == ["4", "C", "B", "I"]
    assert six_tree.path_down("B", "5") == ("B", "D", "5")


def test_geodesic_edges(six_tree):
    geod = six_tree.geodesic_edges("3", "5")
    assert geod == frozenset(
        {TreeEdge("C", "3"), TreeEdge("B", "C"), TreeEdge("B", "D"), TreeEdge("D", "5")}
    )
    assert six_tree.geodesic_edges("4", "4") == frozenset()


def test_leaves_below_and_span(six_tree):
    assert six_tree.leaves_below("B") == ("3", "4", "5", "6")
    assert six_tree.leaves_below("5") == ("5",)
    assert six_tree.leaf_span("C") == (2, 4)
    assert six_tree.leaf_span("I") == (0, 6)


def test_edge_key_orders_preorder_first(six_tree):
    edges = [TreeEdge("C", "4"), TreeEdge("A", "2"), TreeEdge("I", "A")]
    ordered = sorted(edges, key=six_tree.edge_key)
    assert ordered == [TreeEdge("I", "A"), TreeEdge("A", "2"), TreeEdge("C", "4")]


def test_subtree_children_rebuilds(six_tree):
    sub = build_tree(six_tree.subtree_children("B"), "B")
    assert sub.leaf_order == ("3", "4", "5", "6")
    assert sub.spine() == ("B", "D", "6")


def test_single_leaf_tree():
    tree = build_tree({}, "L")
    assert tree.leaf_order == ("L",)
    assert tree.fixed_leaf == "L"
    assert tree.spine() == ("L",)
    assert tree.internal_nodes() == ()


def test_explicit_fixed_leaf():
    tree = build_tree(SIX_LEAF_CHILDREN, "I", fixed_leaf="6")
    assert tree.fixed_leaf == "6"
    with pytest.raises(FixedLeafNotRightmostError):
        build_tree(SIX_LEAF_CHILDREN, "I", fixed_leaf="3")
    with pytest.raises(FixedLeafNotRightmostError):
        build_tree(SIX_LEAF_CHILDREN, "I", fixed_leaf="B")


@pytest.mark.parametrize(
    "children,root",
    [
        ({"I": ("A",)}, "I"),  # one child
        ({"I": ("A", "B", "C")}, "I"),  # three children
        ({"I": ("A", "A")}, "I"),  # duplicate child
        ({"I": ("A", "B"), "X": ("B", "C")}, "I"),  # two parents for B
        ({"I": ("A", "B"), "A": ("I", "C")}, "I"),  # cycle back to the root
        ({"I": ("A", "B"), "Q": ("R", "S")}, "I"),  # disconnected component
        ({"I": ("A", "B")}, "Q"),  # root not described
        ({"I": ("A", "I")}, "I"),  # self child
    ],
)
def test_malformed_trees(children, root):
    with pytest.raises(MalformedTreeError):
        build_tree(children, root)
