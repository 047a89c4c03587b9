"""Exception and warning types raised by morsespec."""


class MorseSpecError(ArithmeticError):
    """Base class for numerical failures in this package."""


class PoleError(MorseSpecError):
    pass


class ConvergenceError(MorseSpecError):
    pass


class PrecisionLossError(MorseSpecError):
    """Cancellation ate more digits than the working precision can spare."""

    def __init__(self, message, digits_lost=None):
        super().__init__(message)
        self.digits_lost = digits_lost


class DomainError(MorseSpecError, ValueError):
    pass


class StiffnessError(MorseSpecError):
    pass


class ScanExhaustedError(MorseSpecError):
    pass


class MonotonicityViolation(MorseSpecError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CorrespondenceViolation(MorseSpecError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class HBViolation(MorseSpecError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InterlacingViolation(MorseSpecError):
    pass


class TruncationWarning(UserWarning):
    """Doubling the truncation box moved an eigenvalue noticeably."""
