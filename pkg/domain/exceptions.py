"""
Custom exceptions for the detection efficiency toolkit.

This module defines application-specific exceptions so that callers (and the
CLI exit-code mapping) can tell invalid inputs apart from numeric failures.
"""


class DetectionError(Exception):
    """Base exception for all detection toolkit errors."""

    pass


class ValidationError(DetectionError):
    """Raised when a domain object violates its invariants."""

    pass


class ConfigurationError(DetectionError):
    """Raised when a run configuration is invalid or incomplete."""

    pass


class DomainError(DetectionError):
    """Raised when an operation is evaluated outside its domain."""

    def __init__(self, message: str, operation: str | None = None):
        super().__init__(message)
        self.operation = operation


class NumericError(DetectionError):
    """Raised when a function evaluation produces a non-finite value."""

    def __init__(self, message: str, abscissa: float | None = None):
        super().__init__(message)
        self.abscissa = abscissa


class NoNonzeroDerivativeError(DetectionError):
    """Raised when every derivative up to the maximum order vanishes."""

    def __init__(self, message: str, max_order: int):
        super().__init__(message)
        self.max_order = max_order


class IncomparableOrdersError(DetectionError):
    """Raised when ARE is requested for detectors with different orders."""

    def __init__(self, nu_a: int, nu_b: int):
        super().__init__(
            f"incomparable orders: detector A has nu={nu_a}, detector B has nu={nu_b}"
        )
        self.nu_a = nu_a
        self.nu_b = nu_b


class EfficacyInstabilityError(DetectionError):
    """Raised when the efficacy estimate is not stable under doubling N."""

    def __init__(self, message: str, values: tuple[float, float]):
        super().__init__(message)
        self.values = values


class SampleSizeExceededError(DetectionError):
    """Raised when the target detection probability is unattainable."""

    def __init__(self, n_max: int, pd_at_n_max: float):
        super().__init__(
            f"n_max exceeded: P_D at n_max={n_max} is {pd_at_n_max:.6g}"
        )
        self.n_max = n_max
        self.pd_at_n_max = pd_at_n_max
