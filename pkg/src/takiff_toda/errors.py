class TakiffError(Exception):
    """Base class for domain errors raised by this package."""


class OrderMismatchError(TakiffError, ValueError):
    pass


class NonUnitError(TakiffError, ZeroDivisionError):
    """Leading coefficient too small to invert."""


class NonPositiveLeadingCoefficientError(TakiffError, ValueError):
    """sqrt/log of a series whose constant term is not positive."""


class SingularPairingError(TakiffError, ValueError):
    """Root pairing matrix is not square and nonsingular."""


class MissingRepresentationError(TakiffError, ValueError):
    pass


class NonFiniteStateError(TakiffError, FloatingPointError):
    def __init__(self, message, step=None, time=None):
        super().__init__(message)
        self.step = step
        self.time = time
