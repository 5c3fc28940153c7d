"""Exception hierarchy shared across the toolkit."""


class SdofLabError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatch(SdofLabError):
    pass


class NonPositivePower(SdofLabError):
    pass


class NumericFailure(SdofLabError):
    pass


class NonConvergence(SdofLabError):
    """Optimizer hit max_iter with gradient above tolerance (reported, not fatal)."""


class AlignmentInfeasible(SdofLabError):
    """No remaining user can realize the current alignment direction.

    Carries the partial plan in ``self.plan``.
    """

    def __init__(self, message, plan=None):
        super().__init__(message)
        self.plan = plan


class DomainError(SdofLabError):
    pass


class CapExceeded(SdofLabError):
    pass


class DecompositionNotUnique(SdofLabError):
    pass


class GammaViolated(SdofLabError):
    pass


class DigitOutOfRange(SdofLabError):
    pass


class DegenerateFit(SdofLabError):
    pass


class InvalidPmf(SdofLabError):
    pass


class UndefinedEquivocation(SdofLabError):
    pass
