"""
Annulus placement model and the distribution of the distance ratio r_cc / r_cp.

The PU transmitter and the CR transmitter sit uniformly in the annulus
[r0, rp] around the PU receiver; the CR receiver sits uniformly in the
annulus [r0, rc] around the CR transmitter. Only distances are ever drawn.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .exceptions import DomainError, InvalidGeometryError
from .specfun import DEFAULT_QUADRATURE, QuadratureSpec, integrate

logger = logging.getLogger(__name__)

PIECE_COUNT = 5


@dataclass(frozen=True)
class Geometry:
    r0: float = 1.0
    rc: float = 100.0
    rp: float = 1000.0

    def __post_init__(self):
        if not (0 < self.r0 < self.rc and self.r0 < self.rp):
            raise InvalidGeometryError(
                f"radii must satisfy 0 < r0 < rc and r0 < rp, got "
                f"r0={self.r0}, rc={self.rc}, rp={self.rp}"
            )

    @property
    def delta(self) -> float:
        return (self.rc ** 2 - self.r0 ** 2) * (self.rp ** 2 - self.r0 ** 2)


@dataclass(frozen=True)
class PiecewiseRatioCdf:
    """
    P(r_cc / r_cp < x) = c_i0 x^-2 + c_i1 + c_i2 x^2 on (theta_i, theta_{i+1}].

    thetas holds theta_1 = 0 through theta_6 = inf; coeffs is a 5x3 array.
    """
    thetas: Tuple[float, ...]
    coeffs: np.ndarray = field(repr=False)

    def piece_index(self, x: float) -> int:
        # A point sitting on a breakpoint belongs to the piece on its left.
        idx = int(np.searchsorted(self.thetas, x, side='left')) - 1
        return min(max(idx, 0), PIECE_COUNT - 1)

    def evaluate_piece(self, i: int, x: float) -> float:
        c0, c1, c2 = self.coeffs[i]
        if np.isinf(x):
            if c2 != 0:
                raise DomainError("piece is unbounded at x = inf")
            return float(c1)
        if x == 0:
            if c0 != 0:
                raise DomainError("piece is unbounded at x = 0")
            return float(c1)
        return float(c0 / x ** 2 + c1 + c2 * x ** 2)

    def __call__(self, x: float) -> float:
        if x <= 0:
            return 0.0
        return self.evaluate_piece(self.piece_index(x), x)


def _coefficients_at(x: float, geom: Geometry) -> Tuple[float, float, float]:
    """
    Coefficients of the polynomial in x^-2, 1, x^2 that is valid around x.

    Conditioning on r_cp with density 2r/(rp^2 - r0^2):
      * r_cp in [lo, hi], lo = max(r0, r0/x), hi = min(rp, rc/x), contributes
        (x^2 r^2 - r0^2) / (rc^2 - r0^2) per unit of r_cp mass;
      * r_cp above max(r0, rc/x) contributes its whole mass.
    Which end of each max/min is active fixes the polynomial on a piece, so
    the same rule covers rc > rp, where the breakpoint order changes.
    """
    r0, rc, rp = geom.r0, geom.rc, geom.rp
    delta = geom.delta
    c0 = c1 = c2 = 0.0

    if r0 / rp < x < rc / r0:
        if x <= rc / rp:
            c2 += 0.5 * rp ** 4
            c1 -= r0 ** 2 * rp ** 2
        else:
            c0 += 0.5 * rc ** 4 - r0 ** 2 * rc ** 2
        if x >= 1.0:
            c2 -= 0.5 * r0 ** 4
            c1 += r0 ** 4
        else:
            c0 += 0.5 * r0 ** 4

    if x > rc / rp:
        if x <= rc / r0:
            c1 += rp ** 2 * (rc ** 2 - r0 ** 2)
            c0 -= rc ** 2 * (rc ** 2 - r0 ** 2)
        else:
            c1 += delta

    return c0 / delta, c1 / delta, c2 / delta


def piecewise_coefficients(geom: Geometry) -> PiecewiseRatioCdf:
    """
    Breakpoints and c_ij of the piecewise ratio CDF.

    For rc <= rp this reproduces the published coefficient list term by
    term; otherwise the breakpoints are sorted and each piece is re-derived.
    """
    if not isinstance(geom, Geometry):
        raise InvalidGeometryError("a Geometry instance is required")
    inner = sorted((geom.r0 / geom.rp, geom.rc / geom.rp, 1.0, geom.rc / geom.r0))
    thetas = (0.0, *inner, float('inf'))

    coeffs = np.zeros((PIECE_COUNT, 3))
    for i in range(1, PIECE_COUNT):
        lo, hi = thetas[i], thetas[i + 1]
        probe = 2.0 * lo if np.isinf(hi) else (lo + hi) / 2.0
        if hi == lo:
            probe = lo
        coeffs[i] = _coefficients_at(probe, geom)

    logger.debug("ratio CDF breakpoints %s", thetas)
    return PiecewiseRatioCdf(thetas=thetas, coeffs=coeffs)


def ratio_cdf(x: float, geom: Geometry, cdf: Optional[PiecewiseRatioCdf] = None) -> float:
    """P(r_cc / r_cp < x)."""
    if x < 0 or np.isnan(x):
        raise DomainError(f"ratio_cdf needs x >= 0, got {x}")
    cdf = cdf or piecewise_coefficients(geom)
    return cdf(x)


def ratio_cdf_by_conditioning(
    x: float, geom: Geometry, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """Same CDF, by integrating P(r_cc < x r | r_cp = r) against the r_cp density."""
    if x <= 0:
        return 0.0
    r0, rc, rp = geom.r0, geom.rc, geom.rp

    def integrand(r):
        conditional = (x ** 2 * r ** 2 - r0 ** 2) / (rc ** 2 - r0 ** 2)
        conditional = min(max(conditional, 0.0), 1.0)
        return conditional * 2.0 * r / (rp ** 2 - r0 ** 2)

    return integrate(integrand, r0, rp, spec, points=(r0 / x, rc / x))


def sample_annulus_distance(r_in: float, r_out: float, rng: np.random.Generator, size=None):
    """
    Distance of a point drawn uniformly over the annulus [r_in, r_out]:
    density 2r / (r_out^2 - r_in^2), drawn by inverting its CDF.
    """
    if not (0 < r_in < r_out):
        raise DomainError(f"annulus needs 0 < r_in < r_out, got [{r_in}, {r_out}]")
    u = rng.random(size)
    return np.sqrt(r_in ** 2 + u * (r_out ** 2 - r_in ** 2))
