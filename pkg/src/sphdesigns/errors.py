"""Exception hierarchy.

Every error carries a stable class name; the CLI reports it verbatim so
scripts can branch on it.
"""


class DesignError(Exception):
    """Base class for all package errors."""


class ClosureOverflow(DesignError):
    """Group closure exceeded its element cap (non-finite or wrong roots)."""


class NonIntegerCoefficient(DesignError):
    """A Molien coefficient was not within tolerance of an integer."""


class EdgeCountMismatch(DesignError):
    pass


class UnknownPolytope(DesignError, KeyError):
    pass


class UnknownGroup(DesignError, KeyError):
    pass


class UnknownPair(DesignError, KeyError):
    pass


class OddDegreeWithoutDoubling(DesignError):
    pass


class DegenerateArrangement(DesignError):
    pass


class QuadratureNotConverged(DesignError):
    pass


class WeightsNotNormalized(DesignError):
    pass


class VanishingAverage(DesignError):
    pass


class DegenerateBalance(DesignError):
    pass


class IncompatibleSigns(DesignError):
    pass


class RootNotBracketed(DesignError):
    pass


class DisconnectedGraph(DesignError):
    """An edge graph has more than one component, so no Euler cycle exists."""


class NotBuildable(DesignError):
    """Catalog row kept for its closed-form counts only (group too large to enumerate)."""
