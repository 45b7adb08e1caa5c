"""
Exception hierarchy for mtsieve.
Every error raised on purpose by the library derives from MtSieveError.
"""


class MtSieveError(Exception):
    """Base class for all mtsieve errors."""


class StatusValidationError(MtSieveError, ValueError):
    """A parameterized status violates one of its structural identities."""


class ZeroModulusError(MtSieveError, ZeroDivisionError):
    def __init__(self, message: str = "zero modulus"):
        super().__init__(message)


class ConstantPolynomialError(MtSieveError, ValueError):
    def __init__(self, message: str = "constant polynomial"):
        super().__init__(message)


class EmptySequenceError(MtSieveError, ValueError):
    def __init__(self, message: str = "empty sequence"):
        super().__init__(message)


class DegeneratePolynomialError(MtSieveError):
    """Minimal polynomial degree fell short of the period exponent."""


class SearchExhaustedError(MtSieveError):
    pass


class InsufficientStreamError(MtSieveError):
    def __init__(self, message: str = "insufficient stream"):
        super().__init__(message)


class SampleTooSmallError(MtSieveError, ValueError):
    def __init__(self, message: str = "sample too small"):
        super().__init__(message)


class SparseRegimeError(MtSieveError, ValueError):
    def __init__(self, message: str = "spec out of sparse regime"):
        super().__init__(message)


class InvalidPValueError(MtSieveError, ValueError):
    pass


class MixedStatusError(MtSieveError, ValueError):
    pass


class MismatchedSpecsError(MtSieveError, ValueError):
    pass


class ConfigError(MtSieveError, ValueError):
    pass


class UsageError(MtSieveError):
    pass


class DuplicateStatusError(MtSieveError):
    """Two minted statuses share a characteristic polynomial."""
