"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the domain where an operation is defined."""


class AccuracyError(RuntimeError):
    """A numerical procedure stopped before reaching its tolerance.

    ``best`` holds the best estimate available when the procedure gave up.
    """

    def __init__(self, message, best=None, error_estimate=None):
        super().__init__(message)
        self.best = best
        self.error_estimate = error_estimate


class ResolutionError(AccuracyError):
    """Finite-lattice truncation is too small to resolve the requested quantity."""
