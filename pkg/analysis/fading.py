"""
Fast fading and shadowing models, and the PDF of the fading ratio
Y = |f~|^2 / |c~|^2 (CP fading over CC fading) for the four scenarios.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import special, stats

from .exceptions import DomainError, UnsupportedConfigurationError
from .models import FadingName, ScenarioName
from .specfun import DEFAULT_QUADRATURE, QuadratureSpec, integrate

logger = logging.getLogger(__name__)

# dB -> natural-log scale for shadowing
BETA = math.log(10.0) / 10.0

MIN_SERIES_TERMS = 18
SERIES_TAIL = 1e-12


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


@dataclass(frozen=True)
class FadingKind:
    """Rayleigh, or Rician with a linear K factor. Powers are unit mean."""
    name: str = FadingName.RAYLEIGH
    k_factor: float = 0.0

    def __post_init__(self):
        if self.name not in FadingName.values:
            raise DomainError(f"unknown fading kind {self.name!r}")
        if not self.k_factor >= 0:
            raise DomainError(f"K factor must be >= 0, got {self.k_factor}")
        if self.name == FadingName.RAYLEIGH and self.k_factor != 0:
            raise DomainError("a Rayleigh link has no K factor")

    @classmethod
    def rayleigh(cls) -> "FadingKind":
        return cls(FadingName.RAYLEIGH, 0.0)

    @classmethod
    def rician(cls, k_factor: float) -> "FadingKind":
        return cls(FadingName.RICIAN, float(k_factor))

    @classmethod
    def rician_db(cls, k_db: float) -> "FadingKind":
        return cls.rician(db_to_linear(k_db))

    @property
    def is_rician(self) -> bool:
        return self.name == FadingName.RICIAN


@dataclass(frozen=True)
class ShadowingParams:
    sigma_db: float = 8.0

    def __post_init__(self):
        if not self.sigma_db >= 0:
            raise DomainError(f"sigma_db must be >= 0, got {self.sigma_db}")

    @property
    def sigma_sf(self) -> float:
        return BETA * self.sigma_db


def default_term_count(k_factor: float) -> int:
    """At least 18 terms, more when the Poisson(K) mixing tail is still heavy."""
    if k_factor == 0:
        return MIN_SERIES_TERMS
    return max(MIN_SERIES_TERMS, int(stats.poisson.isf(SERIES_TAIL, k_factor)) + 2)


@dataclass(frozen=True)
class RatioScenario:
    """
    CP/CC fading pair. For Ric/Ric the series uses nu1 = nu2 = 2 and
    lambda1 = lambda2 = 2K; `terms` is the truncation per index.
    """
    name: str = ScenarioName.RAYRAY
    k_factor: float = 0.0
    terms: Optional[int] = None

    def __post_init__(self):
        if self.name not in ScenarioName.values:
            raise DomainError(f"unknown scenario {self.name!r}")
        if not self.k_factor >= 0:
            raise DomainError(f"K factor must be >= 0, got {self.k_factor}")
        if self.terms is not None and self.terms < 1:
            raise DomainError("series needs at least one term")

    @classmethod
    def from_links(cls, cp: FadingKind, cc: FadingKind, terms: Optional[int] = None) -> "RatioScenario":
        if cp.is_rician and cc.is_rician:
            if cp.k_factor != cc.k_factor:
                raise UnsupportedConfigurationError(
                    "Rician/Rician ratio is only available for equal K on both links"
                )
            return cls(ScenarioName.RICRIC, cp.k_factor, terms)
        if cp.is_rician:
            return cls(ScenarioName.RICRAY, cp.k_factor, terms)
        if cc.is_rician:
            return cls(ScenarioName.RAYRIC, cc.k_factor, terms)
        return cls(ScenarioName.RAYRAY, 0.0, terms)

    @property
    def nu(self) -> int:
        return 2

    @property
    def noncentrality(self) -> float:
        return 2.0 * self.k_factor

    @property
    def term_count(self) -> int:
        return self.terms if self.terms is not None else default_term_count(self.k_factor)

    def links(self):
        """(cp, cc) fading kinds."""
        ray, ric = FadingKind.rayleigh(), FadingKind.rician(self.k_factor)
        return {
            ScenarioName.RAYRAY: (ray, ray),
            ScenarioName.RAYRIC: (ray, ric),
            ScenarioName.RICRAY: (ric, ray),
            ScenarioName.RICRIC: (ric, ric),
        }[self.name]


def power_gain_distribution(kind: FadingKind):
    """
    Frozen scipy distribution of the unit-mean fading power.
    Rician power is a noncentral chi-square (2 dof, noncentrality 2K)
    scaled by 1/(2(K+1)).
    """
    if not kind.is_rician or kind.k_factor == 0:
        return stats.expon()
    k = kind.k_factor
    return stats.ncx2(df=2, nc=2.0 * k, scale=1.0 / (2.0 * (k + 1.0)))


def sample_power_gain(kind: FadingKind, rng: np.random.Generator, size=None):
    """|h~|^2 with E|h~|^2 = 1."""
    if not kind.is_rician:
        return rng.standard_exponential(size)
    k = kind.k_factor
    los = math.sqrt(k / (k + 1.0))
    scatter = math.sqrt(1.0 / (2.0 * (k + 1.0)))
    in_phase = los + scatter * rng.standard_normal(size)
    quadrature = scatter * rng.standard_normal(size)
    return in_phase ** 2 + quadrature ** 2


def sample_shadowing(params: ShadowingParams, rng: np.random.Generator, size=None):
    """Natural-log shadowing X ~ N(0, sigma_sf^2)."""
    return params.sigma_sf * rng.standard_normal(size)


@lru_cache(maxsize=64)
def _series_tables(k_factor: float, terms: int):
    idx = np.arange(terms)
    weights = stats.poisson.pmf(idx, k_factor)
    joint = np.outer(weights, weights)
    a = 1.0 + idx[:, None]          # 0.5 nu1 + j
    b = 1.0 + idx[None, :]          # 0.5 nu2 + k
    log_joint = np.log(joint, where=joint > 0, out=np.full(joint.shape, -np.inf))
    return a, a + b, log_joint - special.betaln(a, b)


@lru_cache(maxsize=1 << 16)
def _ricric_pdf(k_factor: float, terms: int, y: float) -> float:
    a, ab, log_coeff = _series_tables(k_factor, terms)
    log_terms = log_coeff + special.xlogy(a - 1.0, y) - ab * math.log1p(y)
    return float(np.sum(np.exp(log_terms)))


def ratio_pdf_scalar(scenario: RatioScenario, y: float, terms: Optional[int] = None) -> float:
    k = scenario.k_factor
    if scenario.name == ScenarioName.RAYRAY:
        return 1.0 / (1.0 + y) ** 2
    if scenario.name == ScenarioName.RAYRIC:
        return ((k + 1.0) * (y + (k + 1.0) ** 2) / (y + k + 1.0) ** 3
                * math.exp(-k + (k * k + k) / (y + k + 1.0)))
    if scenario.name == ScenarioName.RICRAY:
        d = y + k * y + 1.0
        return (k * (1.0 + k) / d ** 2 * math.exp(-k / d)
                + (1.0 - k * k + y * (1.0 + 2.0 * k + k * k)) / d ** 3
                * math.exp(-k + (k * y + k * k * y) / d))
    return _ricric_pdf(float(k), int(terms or scenario.term_count), float(y))


def ratio_pdf(scenario: RatioScenario, y, terms: Optional[int] = None):
    """Density of Y = |f~|^2 / |c~|^2 at y >= 0."""
    values = np.asarray(y, dtype=float)
    if np.any(~(values >= 0)):
        raise DomainError("ratio_pdf is defined for y >= 0")
    if values.ndim == 0:
        if np.isinf(values):
            return 0.0
        return ratio_pdf_scalar(scenario, float(values), terms)
    return np.array([0.0 if np.isinf(v) else ratio_pdf_scalar(scenario, float(v), terms)
                     for v in values.ravel()]).reshape(values.shape)


def ratio_cdf(scenario: RatioScenario, y: float, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """P(Y < y) by integrating the density."""
    if y < 0:
        raise DomainError("ratio_cdf is defined for y >= 0")
    if y == 0:
        return 0.0
    if np.isinf(y):
        return integrate(lambda t: ratio_pdf_scalar(scenario, t), 0.0, np.inf, spec)
    return integrate(lambda t: ratio_pdf_scalar(scenario, t), 0.0, y, spec)


def series_truncation_error(scenario: RatioScenario, y: float, terms_a: int, terms_b: int) -> float:
    """|pdf(terms_a) - pdf(terms_b)| for the Ric/Ric double series."""
    if scenario.name != ScenarioName.RICRIC:
        raise UnsupportedConfigurationError("truncation error applies to the Rician/Rician series")
    if not (terms_b > terms_a >= 1):
        raise DomainError("need terms_b > terms_a >= 1")
    return abs(ratio_pdf(scenario, y, terms_a) - ratio_pdf(scenario, y, terms_b))
