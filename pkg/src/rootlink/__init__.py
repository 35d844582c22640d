"""Exact analysis of annotated dyadic trees and the matrices they induce.

Build a leaf-indexed rational matrix from a doubly-annotated dyadic tree,
invert it exactly with fraction-free elimination, and read the inverse's
sign structure — exiting roots, links, zero blocks, sub-Markov kernels —
directly off the tree.  Every structural shortcut is cross-checked against
the exact inverse by a randomized self-test harness.
"""

from __future__ import annotations

from .build import (
    Annotation,
    AnnotationViolation,
    TreeMatrix,
    build_matrix,
    random_instance,
    validate_annotation,
)
from .errors import (
    EtaTooSmallError,
    FixedLeafNotRightmostError,
    InvalidAnnotationError,
    MalformedTreeError,
    MissingAnnotationError,
    RootlinkError,
    SingularMatrixError,
    SpecParseError,
    TheoremMismatchError,
    UnknownNodeError,
)
from .inverse import (
    NeumannReport,
    PotentialReport,
    RestrictionCache,
    SchurBlocks,
    TransitionKernel,
    exact_inverse,
    neumann_check,
    potentials,
    schur_blocks,
    transition_kernel,
    verify_mass_recursion,
)
from .kernels import BACKEND
from .links import (
    BlockPattern,
    LinkReport,
    LinkTrace,
    link_matrix,
    link_oracle,
    link_structural,
    zero_pattern,
)
from .matrix import RationalMatrix, to_fraction
from .report import build_report, render_dot, render_report
from .roots import (
    DominanceScreens,
    ExitReport,
    StructuralRootSet,
    StructureSets,
    build_structure_sets,
    diagonal_mass_bounds,
    dominance_screens,
    fixed_leaf_exit,
    roots_structural,
    roots_transpose,
)
from .selftest import SelftestOutcome, regression_instances, run_selftest
from .specfile import format_spec, parse_spec
from .tree import DyadicTree, TreeEdge, build_tree

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BACKEND",
    # tree
    "DyadicTree",
    "TreeEdge",
    "build_tree",
    # matrices
    "RationalMatrix",
    "to_fraction",
    # building
    "Annotation",
    "AnnotationViolation",
    "TreeMatrix",
    "build_matrix",
    "validate_annotation",
    "random_instance",
    # inversion
    "exact_inverse",
    "potentials",
    "PotentialReport",
    "RestrictionCache",
    "SchurBlocks",
    "schur_blocks",
    "verify_mass_recursion",
    "TransitionKernel",
    "transition_kernel",
    "NeumannReport",
    "neumann_check",
    # roots
    "StructureSets",
    "build_structure_sets",
    "roots_transpose",
    "ExitReport",
    "fixed_leaf_exit",
    "StructuralRootSet",
    "roots_structural",
    "DominanceScreens",
    "dominance_screens",
    "diagonal_mass_bounds",
    # links
    "LinkTrace",
    "link_oracle",
    "link_structural",
    "LinkReport",
    "link_matrix",
    "BlockPattern",
    "zero_pattern",
    # documents and reports
    "parse_spec",
    "format_spec",
    "build_report",
    "render_report",
    "render_dot",
    # self-test
    "run_selftest",
    "SelftestOutcome",
    "regression_instances",
    # errors
    "RootlinkError",
    "MalformedTreeError",
    "UnknownNodeError",
    "FixedLeafNotRightmostError",
    "MissingAnnotationError",
    "InvalidAnnotationError",
    "SingularMatrixError",
    "EtaTooSmallError",
    "SpecParseError",
    "TheoremMismatchError",
]
