"""Exception hierarchy shared by all modules."""


class OdeSurfaceError(Exception):
    """Base class for every error raised by this package."""


class ContractViolation(OdeSurfaceError, ValueError):
    """An operation was called with arguments outside its contract."""


class RepeatedRoot(ContractViolation):
    pass


class NonPositiveImaginary(ContractViolation):
    pass


class TooSmall(ContractViolation):
    pass


class HypothesisViolation(ContractViolation):
    """The inputs do not satisfy the hypotheses a bound or diagnostic needs."""


class PreconditionViolation(ContractViolation):
    pass


class ZeroVelocity(OdeSurfaceError, ArithmeticError):
    pass


class DegenerateWedge(OdeSurfaceError, ArithmeticError):
    pass


class DegenerateMetric(OdeSurfaceError, ArithmeticError):
    pass


class NonFiniteSample(OdeSurfaceError, ArithmeticError):
    """A quadrature density returned NaN or an infinity."""

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where
