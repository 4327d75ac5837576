"""Exception hierarchy shared by all modules."""


class CoverCertError(Exception):
    """Base class for all package-specific failures."""


class GeometryError(CoverCertError):
    pass


class UnboundedPolytope(GeometryError):
    pass


class EmptyPolytope(GeometryError):
    pass


class FullDimRequired(GeometryError):
    pass


class MissingRepresentation(GeometryError):
    pass


class EmptySection(GeometryError):
    pass


class ZeroNotInterior(GeometryError):
    pass


class DimensionTooLarge(GeometryError):
    pass


class IllConditionedBasis(GeometryError):
    pass


class NotUniform(CoverCertError):
    pass


class BudgetExceeded(CoverCertError):
    pass


class WeightsInvalid(CoverCertError):
    pass


class Infeasible(CoverCertError):
    pass


class NotIntegrable(CoverCertError):
    pass


class QuadratureBudgetExceeded(CoverCertError):
    pass


class NotIsotropic(CoverCertError):
    pass


class DegenerateMeasure(CoverCertError):
    pass


class UnsupportedDimension(CoverCertError):
    pass
