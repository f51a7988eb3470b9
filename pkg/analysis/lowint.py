"""
Probability of the low interference regime, P(a < 1).

With Y the CP/CC fading ratio, X = X_cc - X_cp ~ N(0, 2 sigma_sf^2),
Z = r_cc / r_cp and K = N_p / N_c, the regime holds when Z < W where
W = K^(1/gamma) e^(X/gamma) Y^(-1/gamma). Integrating the piecewise CDF of Z
against f_W reduces everything to the integrals I(m, theta, kappa) of
w^(2m) f_W(w) over [theta, kappa], each a single integral over
v = y / (1 + y) in (0, 1) with the shadowing integral done in closed form.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .exceptions import ConsistencyError, DomainError
from .fading import RatioScenario, ShadowingParams, ratio_pdf_scalar
from .geometry import PIECE_COUNT, Geometry, piecewise_coefficients
from .specfun import QuadratureSpec, integrate

logger = logging.getLogger(__name__)

RANGE_SLACK = 1e-6


@dataclass(frozen=True)
class LowIntConfig:
    """
    Inputs of P(a < 1). Transmit powers are deliberately absent: the
    regime condition does not depend on them.
    """
    geom: Geometry = field(default_factory=Geometry)
    gamma: float = 3.5
    shadowing: ShadowingParams = field(default_factory=ShadowingParams)
    noise_ratio: float = 1.0
    scenario: RatioScenario = field(default_factory=RatioScenario)
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)

    def __post_init__(self):
        if not self.gamma > 0:
            raise DomainError(f"gamma must be positive, got {self.gamma}")
        if not self.noise_ratio > 0:
            raise DomainError(f"noise_ratio must be positive, got {self.noise_ratio}")


def _log_limit(limit: float, cfg: LowIntConfig) -> float:
    """ln(limit^gamma / K), with limit 0 -> -inf and limit inf -> +inf."""
    if limit == 0:
        return -math.inf
    if math.isinf(limit):
        return math.inf
    return cfg.gamma * math.log(limit) - math.log(cfg.noise_ratio)


def _gaussian_mass(lo: float, hi: float) -> float:
    """Phi(hi) - Phi(lo), taken on the tail that keeps precision."""
    if lo > 0:
        return float(special.ndtr(-lo) - special.ndtr(-hi))
    return float(special.ndtr(hi) - special.ndtr(lo))


def integral_I(m: int, theta: float, kappa: float, cfg: LowIntConfig) -> float:
    """
    I(m, theta, kappa) = integral of w^(2m) f_W(w) over [theta, kappa].
    """
    if m not in (-1, 0, 1):
        raise DomainError(f"m must be -1, 0 or 1, got {m}")
    if not (0 <= theta < kappa):
        raise DomainError(f"need 0 <= theta < kappa, got [{theta}, {kappa}]")

    gamma, noise_ratio = cfg.gamma, cfg.noise_ratio
    std = math.sqrt(2.0) * cfg.shadowing.sigma_sf
    power = 2.0 * m / gamma
    shift = power * std ** 2
    scale = math.exp(0.5 * power ** 2 * std ** 2)
    log_theta = _log_limit(theta, cfg)
    log_kappa = _log_limit(kappa, cfg)
    scenario = cfg.scenario

    def integrand(v):
        if v <= 0.0 or v >= 1.0:
            return 0.0
        y = v / (1.0 - v)
        log_y = math.log(y)
        lo, hi = log_theta + log_y, log_kappa + log_y
        if std > 0:
            mass = _gaussian_mass((lo - shift) / std, (hi - shift) / std)
        else:
            mass = 1.0 if lo <= 0.0 <= hi else 0.0
        if mass == 0.0:
            return 0.0
        weight = math.exp(power * (math.log(noise_ratio) - log_y)) if m else 1.0
        return scale * weight * mass * ratio_pdf_scalar(scenario, y) / (1.0 - v) ** 2

    fronts = []
    for log_limit in (log_theta, log_kappa):
        if math.isfinite(log_limit):
            y_front = math.exp(min(shift - log_limit, 700.0))
            fronts.append(y_front / (1.0 + y_front))
    value = integrate(integrand, 0.0, 1.0, cfg.quadrature, points=fronts)
    logger.debug("I(%d, %.6g, %.6g) = %.12g [%s]", m, theta, kappa, value, scenario.name)
    return value


def prob_low_interference(cfg: LowIntConfig) -> float:
    """
    P(a < 1) as the sum over ratio-CDF pieces i and powers j of
    c_ij * I(j - 1, theta_i, theta_{i+1}).
    """
    cdf = piecewise_coefficients(cfg.geom)
    terms = []
    for i in range(PIECE_COUNT):
        lo, hi = cdf.thetas[i], cdf.thetas[i + 1]
        if hi <= lo:
            continue
        for j in range(3):
            coeff = float(cdf.coeffs[i, j])
            if coeff == 0.0:
                continue
            terms.append(coeff * integral_I(j - 1, lo, hi, cfg))

    total = math.fsum(terms)
    if not (-RANGE_SLACK <= total <= 1.0 + RANGE_SLACK):
        raise ConsistencyError(f"P(a<1) evaluated to {total!r}, outside [0, 1]")
    logger.debug("P(a<1) = %.12g for %s", total, cfg.scenario.name)
    return float(np.clip(total, 0.0, 1.0))
