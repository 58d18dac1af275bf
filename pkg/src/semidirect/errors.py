"""Exception types shared across the package."""


class StructureError(ValueError):
    """Base class for invalid algebraic input.  ``witness`` holds the offending data."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class JacobiViolation(StructureError):
    pass


class NotAntisymmetric(StructureError):
    pass


class NotRepresentation(StructureError):
    pass


class NotDerivation(StructureError):
    pass


class NotSplit(StructureError):
    pass


class NotSquare(StructureError):
    pass


class NotIntegrable(StructureError):
    pass


class NotAutomorphism(StructureError):
    pass


class FactorNotTorsionFree(StructureError):
    pass


class NotTorsionFree(StructureError):
    pass


class NotFlat(StructureError):
    pass


class NotLeftSymmetric(StructureError):
    pass


class Degenerate(StructureError):
    pass


class NotClosed(StructureError):
    pass


class NotSymplectic(StructureError):
    pass


class NotPositiveDefinite(StructureError):
    pass


class SingularTheta(StructureError):
    pass


class PreconditionFailed(StructureError):
    pass


class ParamOutOfRange(StructureError):
    pass


class InternalEquivalenceViolation(AssertionError):
    """Two computations that must agree did not.  Always a bug, never valid input."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report
