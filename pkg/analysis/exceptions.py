"""
Error hierarchy shared by the analytical and Monte Carlo modules.
"""


class CapacityError(Exception):
    """Base class for every error raised by the capacity library."""


class DomainError(CapacityError, ValueError):
    """An argument lies outside the domain of the operation."""


class InvalidGeometryError(DomainError):
    """Annulus radii violate 0 < r0 < rc and r0 < rp."""


class UnsupportedConfigurationError(CapacityError):
    """A fading combination the formulas do not cover (e.g. unequal K on Ric/Ric)."""


class ConsistencyError(CapacityError):
    """An internal numerical result violates a hard invariant."""


class ConvergenceError(CapacityError):
    """
    Quadrature gave up before meeting its tolerance.
    Keeps the best estimate and the error bound it reached.
    """

    def __init__(self, message, estimate=None, error_bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class InsufficientSamplesError(CapacityError):

    def __init__(self, message, required=None, obtained=None):
        super().__init__(message)
        self.required = required
        self.obtained = obtained
