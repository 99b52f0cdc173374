"""Exception hierarchy shared by every module of the package."""


class GeometryError(Exception):
    """Base class for all errors raised by :mod:`gnat`."""


class SingularMetric(GeometryError):
    """Metric determinant vanishes (numerically) at the requested point."""


class OutOfDomain(GeometryError):
    """A point or a finite-difference stencil leaves the chart domain."""


class ChartBreakdown(OutOfDomain):
    """The graph chart of the unit tangent bundle degenerates."""


class DegenerateSpec(GeometryError):
    """Metric coefficients violate the nondegeneracy inequalities."""


class InvalidSpec(GeometryError):
    """Coefficients are outside the range a formula is defined for."""


class NotFlat(GeometryError):
    pass


class NotKKType(GeometryError):
    """A Kaluza-Klein type metric (b = 0) is required."""


class NotSpaceForm(GeometryError):
    pass


class ConstraintViolation(GeometryError):
    """A field on the unit tangent bundle is not tangent to it."""


class InvariantViolation(GeometryError):
    pass
