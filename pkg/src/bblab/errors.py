"""Exception types shared across the package."""


class BBLabError(Exception):
    pass


class DimensionMismatch(BBLabError):
    pass


class TooLarge(BBLabError):
    pass


class DimensionTooLarge(TooLarge):
    pass


class TooLargeForExplicit(TooLarge):
    pass


class SpecViolation(BBLabError):
    pass


class InvalidPermutation(SpecViolation):
    pass


class IndexOutOfRange(SpecViolation):
    pass


class NonCanonicalMap(BBLabError):
    pass


class IllegalDisjunction(BBLabError):
    pass


class NotSeparable(BBLabError):
    """Raised when a requested separator does not exist; carries hull weights."""

    def __init__(self, weights):
        super().__init__("point lies in the convex hull")
        self.weights = weights


class EmptyList(BBLabError):
    pass


class PointNotInP(BBLabError):
    pass


class PointInHull(BBLabError):
    pass


class PIsFeasible(BBLabError):
    pass


class PIsEmpty(BBLabError):
    pass


class PNotInfeasible(BBLabError):
    pass


class InequalityValidForP(BBLabError):
    pass


class InequalityInvalidForHull(BBLabError):
    pass


class PreconditionViolated(BBLabError):
    pass


class StrategyStuck(BBLabError):
    pass


class InternalError(BBLabError):
    """A self-check inside the exact kernel failed; indicates a bug, not bad input."""
