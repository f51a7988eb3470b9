"""
Power-loss parameter alpha, its small-signal approximation, the conditional
CDF of the approximation, and the CR rate with its CDF for fixed link gains.

Notation: |s|^2 = P_p Gamma_pp |p~|^2 / N_p, |t|^2 = P_c Gamma_cp |f~|^2 / N_p,
U = |f~|^2, V = |c~|^2, W = |p~|^2, d = (N_c/N_p)(Gamma_cp/Gamma_cc) and
zeta = 4 / (mu_s mu_t). The regime a < 1 is the event U < V / d.
"""
import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .exceptions import DomainError
from .fading import FadingKind, power_gain_distribution
from .specfun import DEFAULT_QUADRATURE, QuadratureSpec, bessel_k1_complement, integrate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinkBudget:
    mu_s: float
    mu_t: float
    d: float
    gamma_cc: float
    p_c: float = 1.0
    n_c: float = 1.0

    def __post_init__(self):
        for name in ('mu_s', 'mu_t', 'd', 'gamma_cc', 'p_c', 'n_c'):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"LinkBudget.{name} must be positive and finite, got {value}")

    @classmethod
    def from_gains(cls, gamma_pp, gamma_cp, gamma_cc, p_p=1.0, p_c=1.0, n_p=1.0, n_c=1.0):
        return cls(
            mu_s=p_p * gamma_pp / n_p,
            mu_t=p_c * gamma_cp / n_p,
            d=(n_c / n_p) * (gamma_cp / gamma_cc),
            gamma_cc=gamma_cc,
            p_c=p_c,
            n_c=n_c,
        )

    @property
    def zeta(self) -> float:
        return 4.0 / (self.mu_s * self.mu_t)


def _nonnegative(name, values):
    values = np.asarray(values, dtype=float)
    if np.any(~(values >= 0)):
        raise DomainError(f"{name} must be >= 0")
    return values


def _out(values):
    return float(values) if np.ndim(values) == 0 else values


def exact_alpha(s_sq, t_sq):
    """
    Fraction of CR power spent relaying the PU message.

    Evaluated as s t / (sqrt(1 + t(1+s)) + 1)^2, the rationalised form of
    (s/t) [(sqrt(1 + t(1+s)) - 1) / (1+s)]^2; it has no cancellation as
    t -> 0 and tends to s t / 4 there.
    """
    s = _nonnegative('s_sq', s_sq)
    t = _nonnegative('t_sq', t_sq)
    return _out(s * t / (np.sqrt(1.0 + t * (1.0 + s)) + 1.0) ** 2)


def alpha_approx(s_sq, t_sq):
    s = _nonnegative('s_sq', s_sq)
    t = _nonnegative('t_sq', t_sq)
    return _out(s * t / 4.0)


def _check_unit_interval(x):
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"x must lie in [0, 1], got {x}")


def alpha_approx_cdf_rayleigh(x: float, budget: LinkBudget) -> float:
    """P(alpha_approx < x | a < 1) with every link Rayleigh: 1 - z K1(z)."""
    if x < 0:
        raise DomainError("x must be >= 0")
    if x == 0:
        return 0.0
    z = math.sqrt(16.0 * (1.0 + budget.d) * x / (budget.mu_s * budget.mu_t))
    return bessel_k1_complement(z)


def alpha_hat_cdf_rayleigh(x: float, budget: LinkBudget) -> float:
    """CDF of alpha_hat = alpha_approx given alpha_approx < 1 (and a < 1)."""
    _check_unit_interval(x)
    if x == 1.0:
        return 1.0
    return min(alpha_approx_cdf_rayleigh(x, budget) / alpha_approx_cdf_rayleigh(1.0, budget), 1.0)


def alpha_approx_cdf_rayleigh_quadrature(
    x: float, budget: LinkBudget, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> float:
    """1 - integral_0^inf exp(-zeta x (1+d) / t - t) dt, before the Bessel step."""
    if x == 0:
        return 0.0
    b = budget.zeta * x * (1.0 + budget.d)
    peak = math.sqrt(b)
    return 1.0 - integrate(lambda t: math.exp(-b / t - t) if t > 0 else 0.0,
                           0.0, math.inf, spec, points=(peak,))


def _decades(lo: float, hi: float):
    """Powers of ten strictly inside (lo, hi)."""
    if not (0 < lo < hi):
        return ()
    first, last = math.floor(math.log10(lo)) + 1, math.ceil(math.log10(hi)) - 1
    return tuple(10.0 ** k for k in range(first, last + 1) if lo < 10.0 ** k < hi)


def regime_probability(
    budget: LinkBudget,
    u_kind: Optional[FadingKind] = None,
    v_kind: Optional[FadingKind] = None,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """P(a < 1) = P(U < V / d) for fixed link gains; 1 / (1 + d) when both links are Rayleigh."""
    u_kind = u_kind or FadingKind.rayleigh()
    v_kind = v_kind or FadingKind.rayleigh()
    d = budget.d
    if not (u_kind.is_rician or v_kind.is_rician):
        return 1.0 / (1.0 + d)
    U = power_gain_distribution(u_kind)
    V = power_gain_distribution(v_kind)
    return integrate(lambda v: U.cdf(v / d) * V.pdf(v), 0.0, math.inf, spec, points=(d, 1.0))


def alpha_approx_conditional_cdf(
    x: float,
    budget: LinkBudget,
    u_kind: Optional[FadingKind] = None,
    v_kind: Optional[FadingKind] = None,
    w_kind: Optional[FadingKind] = None,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """
    P(U W < zeta x | U < V / d) for arbitrary fading on the CP (U), CC (V)
    and PP (W) links, as the two-term single-integral form over the
    denominator P(U < V / d).
    """
    if x < 0:
        raise DomainError("x must be >= 0")
    if x == 0:
        return 0.0
    U = power_gain_distribution(u_kind or FadingKind.rayleigh())
    V = power_gain_distribution(v_kind or FadingKind.rayleigh())
    W = power_gain_distribution(w_kind or FadingKind.rayleigh())
    d, zx = budget.d, budget.zeta * x

    def first(v):
        if v <= 0:
            return 0.0
        return W.cdf(zx * d / v) * U.cdf(v / d) * V.pdf(v)

    def second(w):
        if w <= 0:
            return 0.0
        return U.cdf(zx / w) * V.sf(zx * d / w) * W.pdf(w)

    # both terms are O(zeta x)
    tight = dataclasses.replace(spec, abs_tol=spec.abs_tol * min(1.0, zx))
    knee = math.sqrt(zx * d)
    numerator = (
        integrate(first, 0.0, math.inf, tight,
                  points=(zx * d, knee, d, 1.0) + _decades(zx * d, 1.0))
        + integrate(second, 0.0, math.inf, tight,
                    points=(zx, math.sqrt(zx), 1.0) + _decades(zx, 1.0))
    )
    denominator = regime_probability(budget, u_kind, v_kind, spec)
    logger.debug("conditional alpha_approx CDF at %.6g: %.12g / %.12g", x, numerator, denominator)
    return numerator / denominator


def alpha_hat_cdf_general(
    x: float,
    budget: LinkBudget,
    u_kind: Optional[FadingKind] = None,
    v_kind: Optional[FadingKind] = None,
    w_kind: Optional[FadingKind] = None,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    _check_unit_interval(x)
    if x == 0:
        return 0.0
    if x == 1.0:
        return 1.0
    kinds = (u_kind, v_kind, w_kind)
    return (alpha_approx_conditional_cdf(x, budget, *kinds, spec=spec)
            / alpha_approx_conditional_cdf(1.0, budget, *kinds, spec=spec))


def cr_rate(c_sq, alpha, p_c: float, n_c: float):
    """log2(1 + |c|^2 (1 - alpha) P_c / N_c) in bits per channel use."""
    c = _nonnegative('c_sq', c_sq)
    a = np.asarray(alpha, dtype=float)
    if np.any(~((a >= 0) & (a <= 1))):
        raise DomainError("alpha must lie in [0, 1]")
    if not (p_c > 0 and n_c > 0):
        raise DomainError("p_c and n_c must be positive")
    return _out(np.log2(1.0 + c * (1.0 - a) * p_c / n_c))


def percent_rate_loss(c_sq, alpha, p_c: float, n_c: float):
    """100 (R(alpha=0) - R(alpha)) / R(alpha=0), zero where R(alpha=0) is zero."""
    full = np.asarray(cr_rate(c_sq, np.zeros_like(np.asarray(alpha, dtype=float)), p_c, n_c))
    reduced = np.asarray(cr_rate(c_sq, alpha, p_c, n_c))
    loss = np.divide(100.0 * (full - reduced), full, out=np.zeros_like(full), where=full > 0)
    return _out(loss)


def cr_rate_cdf(
    x: float,
    budget: LinkBudget,
    alpha_cdf: Optional[Callable[[float], float]] = None,
    cc_kind: Optional[FadingKind] = None,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """
    P(R_CR < x) for fixed link gains: the expectation over |c|^2 of
    P(alpha > 1 - (2^x - 1) N_c / (|c|^2 P_c)).

    alpha_cdf defaults to the all-Rayleigh alpha_hat CDF of the budget.
    Below the knee |c~|^2 < (2^x - 1) N_c / (Gamma_cc P_c) the argument is
    negative and the rate is surely below x.
    """
    if x < 0:
        raise DomainError("rate threshold must be >= 0")
    if x == 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if alpha_cdf is None:
        def alpha_cdf(value):
            return alpha_hat_cdf_rayleigh(value, budget)

    fading = power_gain_distribution(cc_kind or FadingKind.rayleigh())
    excess = math.expm1(x * math.log(2.0)) * budget.n_c / (budget.gamma_cc * budget.p_c)

    def integrand(c):
        threshold = 1.0 - excess / c
        if threshold <= 0.0:
            return fading.pdf(c)
        return (1.0 - alpha_cdf(min(threshold, 1.0))) * fading.pdf(c)

    tail = integrate(integrand, excess, math.inf, spec, points=(2.0 * excess, 1.0))
    return float(min(max(fading.cdf(excess) + tail, 0.0), 1.0))
