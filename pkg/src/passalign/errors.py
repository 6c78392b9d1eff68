"""Exception types raised across the package."""


class PassAlignError(Exception):
    """Base class for all package errors."""


class DegenerateSPlane(PassAlignError, ValueError):
    """Lever is zero or parallel to the surface normal; treat as beta = 0."""


class ZeroForce(PassAlignError, ValueError):
    pass


class WrongSide(PassAlignError, ValueError):
    """Driving force does not push toward the surface."""


class BadContactCount(PassAlignError, ValueError):
    pass


class OutOfValidRange(PassAlignError, ValueError):
    """Tilt angle at or beyond the singularity 3 sin^2|beta| = 1."""


class ZeroNormalForce(PassAlignError, ValueError):
    pass


class ZeroInertia(PassAlignError, ValueError):
    pass


class NonFiniteState(PassAlignError, FloatingPointError):
    pass


class EmptySeries(PassAlignError, ValueError):
    pass


class ZeroReference(PassAlignError, ValueError):
    pass


class TraceTooShort(PassAlignError, ValueError):
    pass


class UnknownAxis(PassAlignError, KeyError):
    pass
