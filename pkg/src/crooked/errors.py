"""Exception hierarchy shared by the geometry, flow and verification modules."""


class CrookedError(ValueError):
    """Base class for all domain errors raised by this package."""


class NotSpacelike(CrookedError):
    pass


class NotLorentzOrthogonal(CrookedError):
    pass


class DegeneratePair(CrookedError):
    """Two directors are parallel, so their orthogonal planes coincide."""


class CrossingPair(CrookedError):
    pass


class NotUltraparallel(CrookedError):
    pass


class NotDisjoint(CrookedError):
    pass


class AxisCase(CrookedError):
    """The vertex displacement is parallel to the axis of the calibrating flow.

    Carries the axis foliation that handles this case instead.
    """

    def __init__(self, message, spec=None):
        super().__init__(message)
        self.spec = spec


class BadRegionParams(CrookedError):
    pass


class CrossingDirectors(CrookedError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ZeroDerivative(CrookedError):
    pass


class InvalidParams(CrookedError):
    pass
