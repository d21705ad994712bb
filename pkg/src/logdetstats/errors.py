"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class NoClosedFormError(ValueError):
    """Requested a closed-form quantity for a family that has none."""


class UnsupportedFamilyError(ValueError):
    """Operation not available for the given matrix family."""


class AccuracyError(RuntimeError):
    """A numerical routine could not meet its accuracy target.

    The best available estimate and its error bound are attached so callers
    can decide whether to use them anyway.
    """

    def __init__(self, message, estimate=None, error_estimate=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate


class ConfigError(ValueError):
    """Invalid experiment configuration (variant/family mismatch etc.)."""
