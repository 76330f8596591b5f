"""Exception hierarchy shared by all scgeom modules."""


class GeometryError(ValueError):
    """Base class for every error raised by scgeom."""


class DomainError(GeometryError):
    """An argument lies outside the domain of the operation."""


class DimensionError(DomainError):
    """Point dimension does not match the body or the operation."""


class DegenerateChordError(DomainError):
    """Two coincident points where a proper chord is required."""


class NoContainingBallError(GeometryError):
    """No closed ball of the requested radius contains the given points.

    ``enclosing_radius`` carries the radius of the minimal enclosing ball
    when it is known, as a diagnostic.
    """

    def __init__(self, message, enclosing_radius=None):
        super().__init__(message)
        self.enclosing_radius = enclosing_radius


class InfeasibleError(GeometryError):
    """An intersection of sets turned out to be empty."""

    def __init__(self, message, enclosing_radius=None):
        super().__init__(message)
        self.enclosing_radius = enclosing_radius


class EmptyBodyError(GeometryError):
    """The body has no points."""


class ScheduleError(GeometryError):
    """An epsilon schedule reached a vacuous (infinite) modulus sample."""


class BudgetError(GeometryError):
    """A discretisation would exceed its configured size budget."""
