"""Shared fixtures: the six-leaf sample instance and small helpers."""

from __future__ import annotations

from fractions import Fraction

import pytest

from rootlink import Annotation, TreeMatrix, build_matrix
from rootlink.tree import DyadicTree, build_tree

SIX_LEAF_CHILDREN = {
    "I": ("A", "B"),
    "A": ("1", "2"),
    "B": ("C", "D"),
    "C": ("3", "4"),
    "D": ("5", "6"),
}

SIX_LEAF_VALUES = {
    "I": (1, 1),
    "A": (2, 3),
    "B": (2, 2),
    "C": (2, 4),
    "D": (3, 3),
    "1": (3, 3),
    "2": (3, 3),
    "3": (4, 4),
    "4": (4, 4),
    "5": (4, 4),
    "6": (4, 4),
}

SIX_LEAF_MATRIX = [
    [3, 2, 1, 1, 1, 1],
    [3, 3, 1, 1, 1, 1],
    [2, 2, 4, 2, 2, 2],
    [2, 2, 4, 4, 2, 2],
    [3, 3, 3, 3, 4, 3],
    [4, 4, 4, 4, 4, 4],
]

# The exact inverse is (1/8) times this integer matrix.
SIX_LEAF_INVERSE_8X = [
    [8, -4, 0, 0, 0, -1],
    [-8, 8, 0, 0, 0, 0],
    [0, 0, 4, 0, 0, -2],
    [0, 0, -4, 4, 0, 0],
    [0, 0, 0, 0, 8, -6],
    [0, -4, 0, -4, -8, 11],
]


def annotation_from(values: dict[str, tuple[int, int]]) -> Annotation:
    return Annotation.from_pairs(
        {node: (Fraction(a), Fraction(b)) for node, (a, b) in values.items()}
    )


def instance(
    children: dict[str, tuple[str, str]],
    root: str,
    values: dict[str, tuple[int, int]],
) -> TreeMatrix:
    return build_matrix(build_tree(children, root), annotation_from(values))


@pytest.fixture(scope="session")
def six_tree() -> DyadicTree:
    return build_tree(SIX_LEAF_CHILDREN, "I")


@pytest.fixture(scope="session")
def six_annotation() -> Annotation:
    return annotation_from(SIX_LEAF_VALUES)


@pytest.fixture(scope="session")
def six_tm(six_tree, six_annotation) -> TreeMatrix:
    return build_matrix(six_tree, six_annotation)


@pytest.fixture(scope="session")
def six_inverse(six_tm):
    return six_tm.matrix.inverse()
