"""Exception hierarchy shared across the package."""


class AncileError(ValueError):
    """Base class for all errors raised by ancile."""


class EmptySampleError(AncileError):
    pass


class NonFiniteError(AncileError):
    pass


class DegenerateSampleError(AncileError):
    """The sample has zero spread, so a scale-free statistic is undefined."""


class DomainError(AncileError):
    pass


class BoundaryError(DomainError):
    """A probability hit 0 or 1 where a logarithm is taken."""


class SampleSizeError(AncileError):
    pass


class CalibrationMismatchError(AncileError):
    pass


class InfeasibleWeightError(AncileError):
    """The combined-variance estimate is non-positive for the requested weight."""


class DimensionMismatchError(AncileError):
    pass


class SpecError(AncileError):
    """An alternative-distribution expression or a study config is malformed."""
