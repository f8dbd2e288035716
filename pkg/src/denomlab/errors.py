"""Exception types shared across the package.

Every error raised by the public API derives from :class:`DenomlabError`,
so callers can catch one base class.  Internal consistency failures (things
that must never happen on valid input) derive from
:class:`InternalConsistencyError` instead and indicate a bug, not bad input.
"""

from __future__ import annotations


class DenomlabError(Exception):
    """Base class for all errors raised by this package."""


# -- surface validation -----------------------------------------------------

class ForbiddenSurface(DenomlabError):
    """Surface is one of the excluded small cases."""


class EmptyBoundary(DenomlabError):
    """Surface has no boundary component."""


class BoundaryComponentWithoutMarkedPoint(DenomlabError):
    """Some boundary component carries no marked point."""


class UnsupportedSurface(DenomlabError):
    """Operation not available for this surface family."""


# -- triangulations ----------------------------------------------------------

class NotALoop(DenomlabError):
    pass


class UnflippableArc(DenomlabError):
    """Attempt to flip the folded side of a self-folded triangle."""


class TooFewBoundaryMarkedPoints(DenomlabError):
    pass


class NotAdmissibleInput(DenomlabError):
    pass


class NotAdmissible(DenomlabError):
    pass


# -- arcs and compatibility --------------------------------------------------

class SurfaceMismatch(DenomlabError):
    pass


class NotPunctureIncident(DenomlabError):
    pass


class IsLoop(DenomlabError):
    pass


class NotEligible(DenomlabError):
    pass


class NoExchange(DenomlabError):
    """A cluster face had no (or more than one) completion; internal failure."""


class UnsupportedPair(DenomlabError):
    pass


class ArcInT(DenomlabError):
    pass


class IncompatibleMultiset(DenomlabError):
    pass


class IncompatibleInput(DenomlabError):
    pass


# -- modification maps -------------------------------------------------------

class NotAPuncture(DenomlabError):
    pass


class NotASet(DenomlabError):
    pass


class InconsistentSignature(DenomlabError):
    pass


# -- cluster engine ----------------------------------------------------------

class ZeroPolynomial(DenomlabError):
    pass


class CapExceeded(DenomlabError):
    pass


class InternalConsistencyError(DenomlabError):
    """Something that must never happen on valid input happened."""


class NonExactDivision(InternalConsistencyError):
    """Exchange-relation division left a remainder; the seed is corrupt."""


class LockstepDivergence(InternalConsistencyError):
    """Geometric and algebraic exploration disagreed."""


class MinimalPositionViolation(InternalConsistencyError):
    """Two canonical curve representatives admit an empty bigon."""
