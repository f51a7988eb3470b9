"""
Special functions and the one-dimensional quadrature engine used by every
analytical formula in the analysis app.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np
from scipy import integrate as sp_integrate
from scipy import special

from .exceptions import ConvergenceError, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 200

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol}")
        if int(self.max_subdivisions) < 1:
            raise DomainError(f"max_subdivisions must be >= 1, got {self.max_subdivisions}")

    def tolerance_for(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_QUADRATURE = QuadratureSpec()


def _scalar_or_array(values):
    values = np.asarray(values, dtype=float)
    return float(values) if values.ndim == 0 else values


def normal_cdf(z):
    """Standard Gaussian CDF, accurate in relative terms far into both tails."""
    return _scalar_or_array(special.ndtr(np.asarray(z, dtype=float)))


def bessel_k1(z):
    """Modified Bessel function of the second kind, order one. z must be > 0."""
    z = np.asarray(z, dtype=float)
    if np.any(~(z > 0)):
        raise DomainError("bessel_k1 is defined for z > 0 only")
    return _scalar_or_array(special.k1(z))


K1_SERIES_CUTOFF = 1.0
K1_SERIES_TERMS = 12


def bessel_k1_complement(z):
    """
    1 - z K1(z) for z >= 0, without the cancellation of the direct form at small z.

    Below K1_SERIES_CUTOFF the ascending series
    sum_k q^(k+1) / (k! (k+1)!) [psi(k+1) + psi(k+2) - 2 ln(z/2)], q = z^2/4,
    is summed; every term is positive there.
    """
    z = np.asarray(z, dtype=float)
    if np.any(~(z >= 0)):
        raise DomainError("bessel_k1_complement is defined for z >= 0 only")
    small = z < K1_SERIES_CUTOFF
    safe = np.where(small & (z > 0), z, 1.0)

    q = safe * safe / 4.0
    log_term = -2.0 * np.log(safe / 2.0)
    psi_k = -np.euler_gamma
    coeff = q.copy()
    series = np.zeros_like(q)
    for k in range(K1_SERIES_TERMS):
        psi_next = psi_k + 1.0 / (k + 1)
        series += coeff * (psi_k + psi_next + log_term)
        coeff = coeff * q / ((k + 1) * (k + 2))
        psi_k = psi_next

    direct = 1.0 - np.where(small, 1.0, z) * special.k1(np.where(small, 1.0, z))
    out = np.where(small, np.where(z > 0, series, 0.0), direct)
    return _scalar_or_array(out)


def beta_fn(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(~(a > 0)) or np.any(~(b > 0)):
        raise DomainError("beta_fn requires a > 0 and b > 0")
    return _scalar_or_array(special.beta(a, b))


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: Optional[QuadratureSpec] = None,
    points: Optional[Iterable[float]] = None,
) -> float:
    """
    Adaptive Gauss-Kronrod integral of f over [a, b].

    An infinite upper limit is folded onto [0, 1) with v = a + t/(1-t), so the
    engine only ever sees finite panels. `points` marks interior locations
    where f has kinks or steep fronts (given in the original variable).

    Raises ConvergenceError when the subdivision budget runs out before the
    requested tolerance is met; the exception carries the best estimate.
    """
    spec = spec or DEFAULT_QUADRATURE
    if np.isnan(a) or np.isnan(b):
        raise DomainError("integration limits must not be NaN")
    if a == b:
        return 0.0
    if np.isinf(a):
        raise DomainError("only the upper integration limit may be infinite")
    if a > b:
        return -integrate(f, b, a, spec, points)

    breaks = sorted({float(p) for p in (points or ()) if a < p < b and np.isfinite(p)})

    if np.isinf(b):
        def g(t):
            if t >= 1.0:
                return 0.0
            return f(a + t / (1.0 - t)) / (1.0 - t) ** 2

        lo, hi = 0.0, 1.0
        breaks = [(p - a) / (1.0 + p - a) for p in breaks]
    else:
        g, lo, hi = f, float(a), float(b)

    breaks = [p for p in breaks if lo < p < hi]
    out = sp_integrate.quad(
        g,
        lo,
        hi,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=int(spec.max_subdivisions),
        points=breaks or None,
        full_output=1,
    )
    value, error_bound = float(out[0]), float(out[1])

    if len(out) > 3 and error_bound > spec.tolerance_for(value):
        raise ConvergenceError(
            f"quadrature did not converge on [{a}, {b}]: {out[3]}",
            estimate=value,
            error_bound=error_bound,
        )
    logger.debug("integrate [%s, %s] -> %.16g (+/- %.3g, %d evals)",
                 a, b, value, error_bound, out[2].get("neval", -1))
    return value
