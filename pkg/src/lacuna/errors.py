"""Exception types shared across the package."""


class LacunaError(Exception):
    """Base class for all package errors."""


class DegenerateHyperplane(LacunaError, ValueError):
    """The hyperplane has no component along the sphere factor (|alpha| = 0)."""


class OutsideLacuna(LacunaError, ValueError):
    """The normal-form parameters violate (a*eps + b)**2 <= 1 - eps."""


class QuadratureFailure(LacunaError, ArithmeticError):
    """Adaptive quadrature exhausted its interval budget before meeting tol."""


class RankDeficient(LacunaError, ArithmeticError):
    """Least-squares design matrix has fewer independent columns than unknowns."""


class EvenDimension(LacunaError, ValueError):
    """A closed-form polynomial was requested in an even dimension."""


class DomainError(LacunaError, ValueError):
    pass


class NoIntersection(LacunaError, ValueError):
    pass
