"""Exception types shared across the package."""


class DomainError(ValueError):
    """A numeric argument lies outside its mathematical domain."""


class ValidationError(ValueError):
    """Structurally invalid input (unsorted nodes, shape mismatch, bad file)."""


class QuadratureConvergenceError(RuntimeError):
    """Adaptive quadrature ran out of panels before meeting the tolerance.

    Carries the best available estimate so callers can decide whether the
    achieved accuracy is still usable.
    """

    def __init__(self, message, best_estimate=None, error_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class KernelAdmissibilityError(RuntimeError):
    """The kernel's Fourier transform is not strictly positive on [-N, N]."""


class TruncationError(RuntimeError):
    """The reciprocal series tail did not drop below tolerance by the cap."""


class FoldConsistencyError(RuntimeError):
    """Coefficients aggregated into one atom disagree in sign beyond noise."""


class IdentityViolationError(RuntimeError):
    """A closed-form identity failed beyond tolerance; signals an upstream
    quadrature or truncation problem rather than bad user input."""
