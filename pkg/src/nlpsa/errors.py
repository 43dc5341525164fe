"""Exception hierarchy shared by every module."""


class NlpsaError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(NlpsaError, ValueError):
    """Inputs violate a precondition (shapes, counts, ranges)."""


class NumericalError(NlpsaError, ArithmeticError):
    """A computation is numerically impossible for the given inputs."""


class DimensionMismatch(UsageError):
    pass


class InvalidSteps(UsageError):
    pass


class InvalidDesign(UsageError):
    pass


class InvalidRange(UsageError):
    pass


class BadParams(UsageError):
    pass


class StepMismatch(UsageError):
    pass


class FrameCountMismatch(UsageError):
    pass


class BadTrialCount(UsageError):
    pass


class SingularDesign(NumericalError):
    """Design matrix is rank deficient or too ill-conditioned to trust."""


class ZeroCoefficients(NumericalError):
    pass


class DegenerateStack(NumericalError):
    """The frame stack has no quadrature pair (second eigenvalue vanishes)."""


class IllConditionedWarning(RuntimeWarning):
    pass
