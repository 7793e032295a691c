"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the domain of an operation."""


class AccuracyError(ArithmeticError):
    """Requested tolerance cannot be met; ``achieved`` holds the attainable bound."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ResourceError(RuntimeError):
    """Problem size exceeds the configured memory or enumeration budget."""


class IntegrityError(RuntimeError):
    """Two independent computations that must agree do not."""


class SolverError(ArithmeticError):
    """Root bracket does not contain a sign change."""
