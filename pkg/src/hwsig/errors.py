"""Exception types raised by the library."""

from __future__ import annotations


class HwsigError(Exception):
    """Base class for all library errors."""


class UnknownType(HwsigError):
    """Cartan type string could not be parsed."""


class InconsistentMarking(HwsigError):
    """Compact/noncompact marking fails the parity closure check."""


class NotInRootLattice(HwsigError):
    """Weight has non-integer coordinates in the simple-root basis."""


class CutoffExceeded(HwsigError):
    """Requested weight is beyond the configured height cutoff."""


class NotOnHyperplane(HwsigError):
    """Base point does not satisfy (lambda, gamma^) = n."""


class NullSpaceDimensionUnexpected(HwsigError):
    """Gram kernel is not one dimensional (point on several hyperplanes)."""


class SingularOverFunctionField(HwsigError):
    """Deformed Gram matrix is singular as a matrix over Q(t)."""


class DegenerateDirection(HwsigError):
    """Deformation direction lies in a wall through the base point."""


class ChamberCrossing(HwsigError):
    """Segment or hyperplane section leaves the requested Weyl chamber."""


class MultipleHyperplanes(HwsigError):
    """Could not isolate a single reducibility hyperplane."""


class GroupTooLarge(HwsigError):
    """Weyl group exceeds the brute-force bound."""


class NotAntidominant(HwsigError):
    """Context weight must be antidominant."""


class NotRegular(HwsigError):
    """Context weight or direction must be regular."""


class IntegralityMismatch(HwsigError):
    """Element does not belong to the integral Weyl group of the weight."""


class NotInWallachRegion(HwsigError):
    """Weight is outside the region where the closed product formula holds."""


class UnresolvablePerturbation(HwsigError):
    """Path perturbation failed to avoid codimension-two intersections."""


class ResourceGuard(HwsigError):
    """Requested brute-force sweep exceeds the desk-scale resource guard."""


class AnchorMismatch(HwsigError, TypeError):
    """Formal characters were combined without re-anchoring."""
