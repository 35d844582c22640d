"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: validation problems (malformed
trees, bad annotations) exit 1, document parse problems exit 2, singular
matrices exit 3, and structural-vs-oracle disagreements exit 4.
"""

__all__ = [
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


class RootlinkError(Exception):
    """Base class for all package-specific errors."""


class MalformedTreeError(RootlinkError, ValueError):
    """The node/child description is not a dyadic tree (cycle, missing child, ...)."""


class UnknownNodeError(RootlinkError, KeyError):
    """A node id was passed that the tree does not contain."""


class FixedLeafNotRightmostError(MalformedTreeError):
    """The requested fixed leaf is not the rightmost leaf of the tree."""


class MissingAnnotationError(RootlinkError, KeyError):
    """A tree node has no (alpha, beta) pair."""


class InvalidAnnotationError(RootlinkError, ValueError):
    """The annotation violates one of the admissibility conditions.

    Carries the tuple of violations found by ``validate_annotation``.
    """

    def __init__(self, violations):
        self.violations = tuple(violations)
        lines = "; ".join(v.message for v in self.violations)
        super().__init__(f"invalid annotation: {lines}")


class SingularMatrixError(RootlinkError, ArithmeticError):
    """Exact elimination found a zero determinant."""


class EtaTooSmallError(RootlinkError, ValueError):
    """The requested kernel scale is below the largest inverse diagonal entry."""


class SpecParseError(RootlinkError, ValueError):
    """An instance document is syntactically unusable (bad JSON, floats, ...)."""


class TheoremMismatchError(RootlinkError, AssertionError):
    """A structural prediction disagreed with the exact oracle.

    This is the loud-failure channel: it always carries enough context to
    reproduce the disagreement.
    """
