"""
Drop-based simulation of the primary/cognitive link pair.

A drop places the nodes, draws four shadowing values and four fading powers,
and derives a, alpha and the CR rate. Drops are generated in fixed-size
blocks; block b of stream s draws from its own SeedSequence keyed on
(seed, s, b), so results never depend on how many workers ran the blocks.
"""
import dataclasses
import logging
import math
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from django.conf import settings
from scipy import stats

from analysis.exceptions import DomainError, InsufficientSamplesError
from analysis.fading import (
    FadingKind,
    power_gain_distribution,
    RatioScenario,
    ShadowingParams,
    sample_power_gain,
    sample_shadowing,
)
from analysis.geometry import Geometry, sample_annulus_distance
from analysis.lowint import LowIntConfig
from analysis.models import SweepAxis
from analysis.powerloss import (
    LinkBudget,
    alpha_approx,
    alpha_approx_cdf_rayleigh,
    alpha_approx_conditional_cdf,
    alpha_hat_cdf_rayleigh,
    cr_rate,
    cr_rate_cdf,
    exact_alpha,
    percent_rate_loss,
    regime_probability,
)
from analysis.specfun import QuadratureSpec

from .models import Stream

logger = logging.getLogger(__name__)

MIN_CALIBRATION_DROPS = 100_000
MIN_CONDITIONED_DROPS = 1_000
FROZEN_DROP_SETS = 5
ANALYTIC_GAIN_SETS = 1000


@dataclass(frozen=True)
class ScenarioConfig:
    geom: Geometry = field(default_factory=Geometry)
    gamma: float = 3.5
    shadowing: ShadowingParams = field(default_factory=ShadowingParams)
    fading_pp: FadingKind = field(default_factory=FadingKind.rayleigh)
    fading_pc: FadingKind = field(default_factory=FadingKind.rayleigh)
    fading_cp: FadingKind = field(default_factory=FadingKind.rayleigh)
    fading_cc: FadingKind = field(default_factory=FadingKind.rayleigh)
    p_p: float = 1.0
    p_c: float = 1.0
    n_p: float = 1.0
    n_c: float = 1.0
    a_p: Optional[float] = None
    a_c: Optional[float] = None
    seed: int = 20090601

    def __post_init__(self):
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise DomainError(f"gamma must be positive, got {self.gamma}")
        for name in ('p_p', 'p_c', 'n_p', 'n_c'):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be positive and finite, got {value}")
        for name in ('a_p', 'a_c'):
            value = getattr(self, name)
            if value is not None and not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be positive and finite, got {value}")
        if (self.a_p is None) != (self.a_c is None):
            raise DomainError("a_p and a_c must be given together")
        if not (0 <= int(self.seed) < 2 ** 64):
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    @property
    def is_calibrated(self) -> bool:
        return self.a_p is not None

    def require_constants(self) -> Tuple[float, float]:
        if not self.is_calibrated:
            raise DomainError("a_p and a_c are not set; calibrate the scenario first")
        return self.a_p, self.a_c

    def ratio_scenario(self, terms: Optional[int] = None) -> RatioScenario:
        return RatioScenario.from_links(self.fading_cp, self.fading_cc, terms)

    def low_int_config(self, quadrature: Optional[QuadratureSpec] = None) -> LowIntConfig:
        """Analytic counterpart; the regime only sees N_p/N_c, never the powers."""
        return LowIntConfig(
            geom=self.geom,
            gamma=self.gamma,
            shadowing=self.shadowing,
            noise_ratio=self.n_p / self.n_c,
            scenario=self.ratio_scenario(),
            quadrature=quadrature or QuadratureSpec(),
        )

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    def along(self, axis: str, value: float) -> "ScenarioConfig":
        """One sweep point; A_p and A_c are dropped since the calibration rule depends on the swept quantity."""
        if axis == SweepAxis.SIGMA:
            changes = {'shadowing': ShadowingParams(sigma_db=value)}
        elif axis == SweepAxis.GAMMA:
            changes = {'gamma': value}
        elif axis == SweepAxis.RC_OVER_RP:
            changes = {'geom': Geometry(r0=self.geom.r0, rc=value * self.geom.rp, rp=self.geom.rp)}
        else:
            raise DomainError(f"unknown sweep axis {axis!r}")
        return self.replace(a_p=None, a_c=None, **changes)


@dataclass(frozen=True)
class Drop:
    r_pp: float
    r_cp: float
    r_cc: float
    x_pp: float
    x_cp: float
    x_cc: float
    x_pc: float
    fp_pp: float
    fp_cp: float
    fp_cc: float
    fp_pc: float
    a: float
    alpha_exact: float
    alpha_approx: float
    r_cr: Optional[float]

    @property
    def in_low_interference(self) -> bool:
        return self.a < 1.0


@dataclass(frozen=True)
class EstimateWithError:
    value: float
    std_error: float
    n: int
    n_effective: int

    def __post_init__(self):
        if not self.std_error >= 0:
            raise DomainError(f"std_error must be >= 0, got {self.std_error}")
        if self.n_effective > self.n:
            raise DomainError("n_effective cannot exceed n")


@dataclass(frozen=True)
class FrozenGains:
    """Placement and shadowing of one drop, held fixed while fading varies."""
    r_pp: float
    r_cp: float
    r_cc: float
    x_pp: float
    x_cp: float
    x_cc: float
    x_pc: float

    def link_gains(self, cfg: ScenarioConfig) -> Tuple[float, float, float]:
        a_p, a_c = cfg.require_constants()
        return (
            a_p * math.exp(self.x_pp) * self.r_pp ** -cfg.gamma,
            a_c * math.exp(self.x_cp) * self.r_cp ** -cfg.gamma,
            a_c * math.exp(self.x_cc) * self.r_cc ** -cfg.gamma,
        )

    def budget(self, cfg: ScenarioConfig) -> LinkBudget:
        gamma_pp, gamma_cp, gamma_cc = self.link_gains(cfg)
        return LinkBudget.from_gains(
            gamma_pp, gamma_cp, gamma_cc, p_p=cfg.p_p, p_c=cfg.p_c, n_p=cfg.n_p, n_c=cfg.n_c,
        )


LARGE_SCALE_FIELDS = ('r_pp', 'r_cp', 'r_cc', 'x_pp', 'x_cp', 'x_cc', 'x_pc')
FADING_FIELDS = ('fp_pp', 'fp_cp', 'fp_cc', 'fp_pc')
DERIVED_FIELDS = ('a', 'c_sq', 's_sq', 't_sq', 'alpha_exact', 'alpha_approx', 'r_cr')


@dataclass
class DropBatch:
    """Column-wise drops; r_cr is NaN where a >= 1, alpha columns are NaN when uncalibrated."""
    r_pp: np.ndarray
    r_cp: np.ndarray
    r_cc: np.ndarray
    x_pp: np.ndarray
    x_cp: np.ndarray
    x_cc: np.ndarray
    x_pc: np.ndarray
    fp_pp: np.ndarray
    fp_cp: np.ndarray
    fp_cc: np.ndarray
    fp_pc: np.ndarray
    a: np.ndarray
    c_sq: np.ndarray
    s_sq: np.ndarray
    t_sq: np.ndarray
    alpha_exact: np.ndarray
    alpha_approx: np.ndarray
    r_cr: np.ndarray

    def __len__(self):
        return len(self.a)

    def drop(self, i: int) -> Drop:
        r_cr = float(self.r_cr[i])
        return Drop(
            **{name: float(getattr(self, name)[i]) for name in LARGE_SCALE_FIELDS + FADING_FIELDS},
            a=float(self.a[i]),
            alpha_exact=float(self.alpha_exact[i]),
            alpha_approx=float(self.alpha_approx[i]),
            r_cr=None if math.isnan(r_cr) else r_cr,
        )

    def validate(self, cfg: ScenarioConfig):
        geom = cfg.geom
        checks = {
            'r_pp': (self.r_pp >= geom.r0) & (self.r_pp <= geom.rp),
            'r_cp': (self.r_cp >= geom.r0) & (self.r_cp <= geom.rp),
            'r_cc': (self.r_cc >= geom.r0) & (self.r_cc <= geom.rc),
            'a': self.a > 0,
        }
        if cfg.is_calibrated:
            checks['alpha_exact'] = (self.alpha_exact >= 0) & (self.alpha_exact < 1)
            in_regime = self.a < 1
            checks['r_cr'] = np.where(in_regime, self.r_cr >= 0, np.isnan(self.r_cr))
        for name, ok in checks.items():
            if not np.all(ok):
                raise AssertionError(f"drop invariant violated for {name} at index {int(np.argmin(ok))}")


def block_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for the substream (seed, *key)."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key)))


def _draw_large_scale(cfg: ScenarioConfig, rng: np.random.Generator, size=None) -> Dict[str, np.ndarray]:
    geom = cfg.geom
    return {
        'r_pp': sample_annulus_distance(geom.r0, geom.rp, rng, size),
        'r_cp': sample_annulus_distance(geom.r0, geom.rp, rng, size),
        'r_cc': sample_annulus_distance(geom.r0, geom.rc, rng, size),
        'x_pp': sample_shadowing(cfg.shadowing, rng, size),
        'x_cp': sample_shadowing(cfg.shadowing, rng, size),
        'x_cc': sample_shadowing(cfg.shadowing, rng, size),
        'x_pc': sample_shadowing(cfg.shadowing, rng, size),
    }


def freeze_link_gains(cfg: ScenarioConfig, rng: np.random.Generator) -> FrozenGains:
    """Draws one placement and shadowing realisation in the order a drop would."""
    return FrozenGains(**{name: float(value) for name, value in _draw_large_scale(cfg, rng).items()})


def sample_drops(
    cfg: ScenarioConfig, rng: np.random.Generator, n: int, frozen: Optional[FrozenGains] = None
) -> DropBatch:
    """
    n drops from rng. With `frozen`, distances and shadowing are those of the
    frozen drop and only the fast fading is drawn.
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    if frozen is None:
        columns = _draw_large_scale(cfg, rng, n)
    else:
        columns = {name: np.full(n, getattr(frozen, name)) for name in LARGE_SCALE_FIELDS}
    columns['fp_pp'] = sample_power_gain(cfg.fading_pp, rng, n)
    columns['fp_cp'] = sample_power_gain(cfg.fading_cp, rng, n)
    columns['fp_cc'] = sample_power_gain(cfg.fading_cc, rng, n)
    columns['fp_pc'] = sample_power_gain(cfg.fading_pc, rng, n)

    gamma = cfg.gamma
    # A_c cancels in a, so it is formed without any constant
    columns['a'] = np.sqrt(
        cfg.n_c * np.exp(columns['x_cp'] - columns['x_cc'])
        * (columns['r_cc'] / columns['r_cp']) ** gamma * columns['fp_cp']
        / (cfg.n_p * columns['fp_cc'])
    )

    if cfg.is_calibrated:
        a_p, a_c = cfg.a_p, cfg.a_c
        gamma_pp = a_p * np.exp(columns['x_pp']) * columns['r_pp'] ** -gamma
        gamma_cp = a_c * np.exp(columns['x_cp']) * columns['r_cp'] ** -gamma
        gamma_cc = a_c * np.exp(columns['x_cc']) * columns['r_cc'] ** -gamma
        s_sq = cfg.p_p * gamma_pp * columns['fp_pp'] / cfg.n_p
        t_sq = cfg.p_c * gamma_cp * columns['fp_cp'] / cfg.n_p
        c_sq = gamma_cc * columns['fp_cc']
        alpha = np.asarray(exact_alpha(s_sq, t_sq))
        rate = np.asarray(cr_rate(c_sq, alpha, cfg.p_c, cfg.n_c))
        columns.update(
            c_sq=c_sq,
            s_sq=s_sq,
            t_sq=t_sq,
            alpha_exact=alpha,
            alpha_approx=np.asarray(alpha_approx(s_sq, t_sq)),
            r_cr=np.where(columns['a'] < 1.0, rate, np.nan),
        )
    else:
        missing = np.full(n, np.nan)
        columns.update({name: missing for name in DERIVED_FIELDS if name != 'a'})
    return DropBatch(**columns)


def run_drop(cfg: ScenarioConfig, rng: np.random.Generator) -> Drop:
    cfg.require_constants()
    return sample_drops(cfg, rng, 1).drop(0)


# ── Block scheduling ──────────────────────────────────────────────────────────

def _block_size(block_size: Optional[int]) -> int:
    size = int(block_size or settings.CR_CAPACITY['BLOCK_SIZE'])
    if size < 1:
        raise DomainError(f"block size must be >= 1, got {size}")
    return size


def _workers(workers: Optional[int]) -> int:
    return max(1, int(workers or settings.CR_CAPACITY['WORKERS']))


def _block_plan(n: int, block_size: int) -> List[Tuple[int, int]]:
    blocks = []
    for index, start in enumerate(range(0, n, block_size)):
        blocks.append((index, min(block_size, n - start)))
    return blocks


def _simulate_block(task):
    cfg, key, block, size, names, frozen = task
    batch = sample_drops(cfg, block_rng(cfg.seed, *key, block), size, frozen)
    if __debug__:
        batch.validate(cfg)
    return {name: getattr(batch, name) for name in names}


def _calibration_block(task):
    cfg, block, size, include_fading = task
    rng = block_rng(cfg.seed, Stream.CALIBRATION, block)
    r_pp = sample_annulus_distance(cfg.geom.r0, cfg.geom.rp, rng, size)
    x_pp = sample_shadowing(cfg.shadowing, rng, size)
    fp_pp = sample_power_gain(cfg.fading_pp, rng, size) if include_fading else np.ones(size)
    return np.exp(x_pp) * r_pp ** -cfg.gamma * fp_pp


def _run_blocks(func: Callable, tasks: list, workers: int) -> list:
    if workers > 1 and len(tasks) > 1:
        with Pool(processes=min(workers, len(tasks))) as pool:
            return pool.map(func, tasks)
    return [func(task) for task in tasks]


def simulate(
    cfg: ScenarioConfig,
    n: int,
    names: Sequence[str],
    key: Tuple[int, ...] = (Stream.DROPS,),
    frozen: Optional[FrozenGains] = None,
    workers: Optional[int] = None,
    block_size: Optional[int] = None,
) -> Dict[str, np.ndarray]:
    """Requested DropBatch columns for drops 0..n-1 of the stream `key`, in drop order."""
    if n < 1:
        raise DomainError(f"need at least one drop, got {n}")
    plan = _block_plan(int(n), _block_size(block_size))
    tasks = [(cfg, tuple(key), block, size, tuple(names), frozen) for block, size in plan]
    workers = _workers(workers)
    logger.info("simulating %d drops in %d blocks on %d worker(s)", n, len(plan), workers)
    parts = _run_blocks(_simulate_block, tasks, workers)
    return {name: np.concatenate([part[name] for part in parts]) for name in names}


# ── Calibration ───────────────────────────────────────────────────────────────

def calibrate_constants(
    cfg: ScenarioConfig,
    n: int,
    quantile_prob: float = 0.95,
    snr_threshold_db: float = 5.0,
    include_fading: bool = True,
    workers: Optional[int] = None,
    block_size: Optional[int] = None,
) -> Tuple[float, float]:
    """
    A_p such that the PU receives an SNR of at least snr_threshold_db with
    probability quantile_prob, and A_c = A_p (R_c / R_p)^gamma so both
    transmitters deliver the same power at their cell edges.
    """
    if n < MIN_CALIBRATION_DROPS:
        raise InsufficientSamplesError(
            f"calibration needs at least {MIN_CALIBRATION_DROPS} drops, got {n}",
            required=MIN_CALIBRATION_DROPS,
            obtained=n,
        )
    if not 0 < quantile_prob < 1:
        raise DomainError(f"quantile_prob must lie in (0, 1), got {quantile_prob}")
    plan = _block_plan(int(n), _block_size(block_size))
    tasks = [(cfg, block, size, include_fading) for block, size in plan]
    gains = np.concatenate(_run_blocks(_calibration_block, tasks, _workers(workers)))

    q = float(np.quantile(gains, 1.0 - quantile_prob))
    a_p = 10.0 ** (snr_threshold_db / 10.0) * cfg.n_p / (cfg.p_p * q)
    a_c = a_p * (cfg.geom.rc / cfg.geom.rp) ** cfg.gamma
    logger.info("calibrated a_p=%.6g a_c=%.6g from %d drops (fading %s)",
                a_p, a_c, n, "included" if include_fading else "excluded")
    return a_p, a_c


def with_calibrated_constants(cfg: ScenarioConfig, n: Optional[int] = None, **kwargs) -> ScenarioConfig:
    n = n or settings.CR_CAPACITY['CALIBRATION_DROPS']
    a_p, a_c = calibrate_constants(cfg, n, **kwargs)
    return cfg.replace(a_p=a_p, a_c=a_c)


# ── Estimators ────────────────────────────────────────────────────────────────

def _proportion(hits: int, n: int) -> EstimateWithError:
    p = hits / n
    return EstimateWithError(value=p, std_error=math.sqrt(p * (1.0 - p) / n), n=n, n_effective=n)


def _mean(values: np.ndarray, n: int) -> EstimateWithError:
    count = len(values)
    if count == 0:
        return EstimateWithError(value=math.nan, std_error=0.0, n=n, n_effective=0)
    std_error = float(np.std(values, ddof=1)) / math.sqrt(count) if count > 1 else 0.0
    return EstimateWithError(value=float(np.mean(values)), std_error=std_error, n=n, n_effective=count)


def _require_conditioned(count: int, what: str):
    if count < MIN_CONDITIONED_DROPS:
        raise InsufficientSamplesError(
            f"only {count} drops satisfy {what}; need {MIN_CONDITIONED_DROPS}",
            required=MIN_CONDITIONED_DROPS,
            obtained=count,
        )


def empirical_cdf(samples, grid) -> Tuple[np.ndarray, np.ndarray]:
    """P(sample < x) at each grid point with binomial standard errors."""
    ordered = np.sort(np.asarray(samples, dtype=float))
    n = len(ordered)
    if n == 0:
        raise InsufficientSamplesError("empirical CDF of an empty sample", required=1, obtained=0)
    values = np.searchsorted(ordered, np.asarray(grid, dtype=float), side='left') / n
    return values, np.sqrt(values * (1.0 - values) / n)


def ks_band(n: int, level: float = 0.95) -> float:
    """Asymptotic half-width of a simultaneous KS confidence band."""
    return float(stats.kstwobign.ppf(level)) / math.sqrt(n)


def estimate_p_low_interference(
    cfg: ScenarioConfig, n: int, workers: Optional[int] = None, block_size: Optional[int] = None
) -> EstimateWithError:
    a = simulate(cfg, n, ('a',), workers=workers, block_size=block_size)['a']
    return _proportion(int(np.count_nonzero(a < 1.0)), n)


@dataclass
class AlphaStats:
    n: int
    n_effective: int
    n_hat: int
    mean_alpha: EstimateWithError
    mean_alpha_approx: EstimateWithError
    mean_alpha_hat: EstimateWithError
    bin_edges: np.ndarray = field(repr=False)
    density_exact: np.ndarray = field(repr=False)
    density_hat: np.ndarray = field(repr=False)
    ks_distance: float
    alpha_exact: np.ndarray = field(repr=False)
    alpha_hat: np.ndarray = field(repr=False)

    @property
    def discarded_fraction(self) -> float:
        return 1.0 - self.n_effective / self.n

    @property
    def bin_centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])

    def cdf_exact(self, grid):
        return empirical_cdf(self.alpha_exact, grid)

    def cdf_hat(self, grid):
        return empirical_cdf(self.alpha_hat, grid)


def _log_histogram(samples: np.ndarray, edges: np.ndarray) -> np.ndarray:
    logs = np.log10(samples[samples > 0])
    density, _ = np.histogram(logs, bins=edges, density=True)
    return density


def estimate_alpha_stats(
    cfg: ScenarioConfig,
    n: int,
    bins: int = 60,
    workers: Optional[int] = None,
    block_size: Optional[int] = None,
) -> AlphaStats:
    """
    alpha given a < 1, and alpha_hat (alpha_approx given also alpha_approx < 1),
    with densities of log10(alpha) on a shared set of bins.
    """
    cfg.require_constants()
    cols = simulate(cfg, n, ('a', 'alpha_exact', 'alpha_approx'), workers=workers, block_size=block_size)
    regime = cols['a'] < 1.0
    exact = cols['alpha_exact'][regime]
    approx = cols['alpha_approx'][regime]
    hat = approx[approx < 1.0]
    _require_conditioned(len(exact), "a < 1")
    _require_conditioned(len(hat), "a < 1 and alpha_approx < 1")

    logs = np.log10(np.concatenate([exact[exact > 0], hat[hat > 0]]))
    edges = np.linspace(math.floor(logs.min()), math.ceil(logs.max()), bins + 1)
    result = AlphaStats(
        n=n,
        n_effective=len(exact),
        n_hat=len(hat),
        mean_alpha=_mean(exact, n),
        mean_alpha_approx=_mean(approx, n),
        mean_alpha_hat=_mean(hat, n),
        bin_edges=edges,
        density_exact=_log_histogram(exact, edges),
        density_hat=_log_histogram(hat, edges),
        ks_distance=float(stats.ks_2samp(exact, hat).statistic),
        alpha_exact=exact,
        alpha_hat=hat,
    )
    logger.info("alpha stats: E(alpha)=%.6g, %.2f%% of drops discarded, KS(alpha, alpha_hat)=%.4g",
                result.mean_alpha.value, 100.0 * result.discarded_fraction, result.ks_distance)
    return result


@dataclass
class RateStats:
    n: int
    p_low_interference: EstimateWithError
    mean_rate: EstimateWithError
    mean_percent_loss: EstimateWithError
    ks_hat_vs_exact: float
    rates: np.ndarray = field(repr=False)

    @property
    def n_effective(self) -> int:
        return len(self.rates)

    @property
    def discarded_fraction(self) -> float:
        return 1.0 - self.n_effective / self.n

    def cdf(self, grid):
        return empirical_cdf(self.rates, grid)


def estimate_rate_stats(
    cfg: ScenarioConfig, n: int, workers: Optional[int] = None, block_size: Optional[int] = None
) -> RateStats:
    """CR rate and percent rate loss given a < 1; both rates of a drop share its |c|^2."""
    cfg.require_constants()
    cols = simulate(cfg, n, ('a', 'c_sq', 'alpha_exact', 'alpha_approx', 'r_cr'),
                    workers=workers, block_size=block_size)
    regime = cols['a'] < 1.0
    _require_conditioned(int(np.count_nonzero(regime)), "a < 1")
    rates = cols['r_cr'][regime]
    hat = regime & (cols['alpha_approx'] < 1.0)
    hat_rates = np.asarray(cr_rate(cols['c_sq'][hat], cols['alpha_approx'][hat], cfg.p_c, cfg.n_c))
    loss = np.asarray(percent_rate_loss(cols['c_sq'][regime], cols['alpha_exact'][regime], cfg.p_c, cfg.n_c))
    result = RateStats(
        n=n,
        p_low_interference=_proportion(int(np.count_nonzero(regime)), n),
        mean_rate=_mean(rates, n),
        mean_percent_loss=_mean(loss, n),
        ks_hat_vs_exact=float(stats.ks_2samp(rates, hat_rates).statistic),
        rates=rates,
    )
    logger.info("rate stats: E(R_CR)=%.6g, loss=%.4g%%, %.2f%% of drops discarded",
                result.mean_rate.value, result.mean_percent_loss.value, 100.0 * result.discarded_fraction)
    return result


@dataclass(frozen=True)
class PowerInflationPoint:
    beta: float
    mean_rate: EstimateWithError
    p_low_interference: EstimateWithError


def sweep_power_inflation(
    cfg: ScenarioConfig,
    betas: Sequence[float],
    n: int,
    workers: Optional[int] = None,
    block_size: Optional[int] = None,
) -> List[PowerInflationPoint]:
    """Mean CR rate with P_c scaled by each beta; A_c is deliberately left alone."""
    if any(not beta > 0 for beta in betas):
        raise DomainError("every beta must be positive")
    points = []
    for beta in betas:
        result = estimate_rate_stats(cfg.replace(p_c=cfg.p_c * beta), n, workers=workers, block_size=block_size)
        points.append(PowerInflationPoint(beta, result.mean_rate, result.p_low_interference))
    return points


# ── Fixed link gains ──────────────────────────────────────────────────────────

def sample_frozen_drops(
    cfg: ScenarioConfig,
    index: int,
    n: int,
    workers: Optional[int] = None,
    block_size: Optional[int] = None,
) -> Tuple[FrozenGains, Dict[str, np.ndarray]]:
    """Frozen drop set `index`: its link gains and n fading realisations over them."""
    gains = freeze_link_gains(cfg, block_rng(cfg.seed, Stream.FROZEN_GAINS, index))
    cols = simulate(
        cfg, n, ('a', 'c_sq', 'alpha_exact', 'alpha_approx', 'r_cr'),
        key=(Stream.FROZEN_FADING, index), frozen=gains, workers=workers, block_size=block_size,
    )
    return gains, cols


def analytic_alpha_hat_cdf(cfg: ScenarioConfig, budget: LinkBudget) -> Callable[[float], float]:
    """CDF of alpha_hat for fixed gains: the Bessel form when CP, CC and PP are all Rayleigh."""
    kinds = (cfg.fading_cp, cfg.fading_cc, cfg.fading_pp)
    if not any(kind.is_rician for kind in kinds):
        return lambda x: alpha_hat_cdf_rayleigh(x, budget)
    total = alpha_approx_conditional_cdf(1.0, budget, *kinds)

    def cdf(x):
        if x <= 0:
            return 0.0
        if x >= 1:
            return 1.0
        return alpha_approx_conditional_cdf(x, budget, *kinds) / total

    return cdf


def _regime_alpha_approx_cdf(cfg: ScenarioConfig, budget: LinkBudget) -> Callable[[float], float]:
    """x -> P(alpha_approx < x | a < 1) for fixed gains, not yet conditioned on alpha_approx < 1."""
    kinds = (cfg.fading_cp, cfg.fading_cc, cfg.fading_pp)
    if not any(kind.is_rician for kind in kinds):
        return lambda x: alpha_approx_cdf_rayleigh(x, budget)
    return lambda x: alpha_approx_conditional_cdf(x, budget, *kinds)


def estimate_analytic_alpha_hat_cdf(
    cfg: ScenarioConfig, grid: Sequence[float], gain_sets: int = ANALYTIC_GAIN_SETS
) -> np.ndarray:
    """
    CDF of alpha_hat pooled over drops, as the fixed-gain conditional CDFs
    averaged over `gain_sets` frozen placements and shadowings. Each set is
    weighted by its chance of landing in a < 1; the result is renormalised
    by the same mixture at x = 1.
    """
    cfg.require_constants()
    if gain_sets < 1:
        raise DomainError(f"gain_sets must be >= 1, got {gain_sets}")
    grid = np.clip(np.asarray(grid, dtype=float), 0.0, 1.0)
    numerator = np.zeros_like(grid)
    total = 0.0
    for index in range(gain_sets):
        budget = freeze_link_gains(cfg, block_rng(cfg.seed, Stream.FROZEN_GAINS, index)).budget(cfg)
        weight = regime_probability(budget, cfg.fading_cp, cfg.fading_cc)
        cdf = _regime_alpha_approx_cdf(cfg, budget)
        numerator += weight * np.array([cdf(float(x)) if x > 0 else 0.0 for x in grid])
        total += weight * cdf(1.0)
    if not total > 0:
        raise InsufficientSamplesError(
            "no gain set can produce alpha_approx < 1", required=1, obtained=0
        )
    logger.info("analytic alpha_hat CDF averaged over %d gain sets", gain_sets)
    return np.minimum(numerator / total, 1.0)


def analytic_log_density(
    cfg: ScenarioConfig, edges: Sequence[float], gain_sets: int = ANALYTIC_GAIN_SETS
) -> np.ndarray:
    """Density of log10(alpha_hat) per bin between log10 `edges`."""
    edges = np.asarray(edges, dtype=float)
    cdf = estimate_analytic_alpha_hat_cdf(cfg, 10.0 ** edges, gain_sets)
    return np.diff(cdf) / np.diff(edges)


@dataclass
class FrozenAlphaCdf:
    index: int
    gains: FrozenGains
    budget: LinkBudget
    grid: np.ndarray
    analytic: np.ndarray
    mc_exact: np.ndarray
    mc_hat: np.ndarray
    mc_hat_std_error: np.ndarray
    n_effective: int
    n_hat: int
    band: float


def estimate_frozen_alpha_cdf(
    cfg: ScenarioConfig,
    n: int,
    grid: Sequence[float],
    drop_sets: int = FROZEN_DROP_SETS,
    workers: Optional[int] = None,
    block_size: Optional[int] = None,
) -> List[FrozenAlphaCdf]:
    """Analytic and simulated CDFs of alpha and alpha_hat for each of the first frozen drop sets."""
    cfg.require_constants()
    grid = np.asarray(grid, dtype=float)
    results = []
    for index in range(drop_sets):
        gains, cols = sample_frozen_drops(cfg, index, n, workers=workers, block_size=block_size)
        budget = gains.budget(cfg)
        regime = cols['a'] < 1.0
        exact = cols['alpha_exact'][regime]
        approx = cols['alpha_approx'][regime]
        hat = approx[approx < 1.0]
        _require_conditioned(len(hat), f"a < 1 and alpha_approx < 1 in frozen drop set {index}")

        cdf = analytic_alpha_hat_cdf(cfg, budget)
        mc_hat, mc_hat_se = empirical_cdf(hat, grid)
        results.append(FrozenAlphaCdf(
            index=index,
            gains=gains,
            budget=budget,
            grid=grid,
            analytic=np.array([cdf(float(x)) for x in grid]),
            mc_exact=empirical_cdf(exact, grid)[0],
            mc_hat=mc_hat,
            mc_hat_std_error=mc_hat_se,
            n_effective=len(exact),
            n_hat=len(hat),
            band=ks_band(len(hat)),
        ))
        logger.info("frozen drop set %d: d=%.4g, %d of %d drops kept for alpha_hat",
                    index, budget.d, len(hat), n)
    return results


def default_rate_grid(cfg: ScenarioConfig, budget: LinkBudget, points: int = 20) -> np.ndarray:
    """Evenly spaced rates up to the alpha = 0 rate at the 99th percentile of |c~|^2."""
    c_high = float(power_gain_distribution(cfg.fading_cc).ppf(0.99))
    top = math.log2(1.0 + budget.gamma_cc * c_high * cfg.p_c / cfg.n_c)
    return np.linspace(top / points, top, points)


@dataclass
class FrozenRateCdf:
    index: int
    gains: FrozenGains
    budget: LinkBudget
    grid: np.ndarray
    analytic: np.ndarray
    mc_hat: np.ndarray
    mc_hat_std_error: np.ndarray
    mc_exact: np.ndarray
    mc_exact_std_error: np.ndarray
    n_hat: int
    ks_hat_vs_exact: float


def estimate_frozen_rate_cdf(
    cfg: ScenarioConfig,
    n: int,
    grid: Optional[Sequence[float]] = None,
    index: int = 0,
    workers: Optional[int] = None,
    block_size: Optional[int] = None,
) -> FrozenRateCdf:
    """
    Rate CDF for the gains of frozen drop set `index`, three ways:
      * analytic, averaging the alpha_hat CDF over |c~|^2;
      * simulated with alpha_hat and an independently drawn |c~|^2, the
        model behind the analytic curve;
      * simulated with exact alpha and the drop's own |c~|^2 under a < 1.
    """
    cfg.require_constants()
    gains, cols = sample_frozen_drops(cfg, index, n, workers=workers, block_size=block_size)
    budget = gains.budget(cfg)
    grid = default_rate_grid(cfg, budget) if grid is None else np.asarray(grid, dtype=float)
    regime = cols['a'] < 1.0
    approx = cols['alpha_approx'][regime]
    hat = approx[approx < 1.0]
    _require_conditioned(len(hat), f"a < 1 and alpha_approx < 1 in frozen drop set {index}")

    fresh = sample_power_gain(cfg.fading_cc, block_rng(cfg.seed, Stream.INDEPENDENT_CC, index), len(hat))
    hat_rates = np.asarray(cr_rate(budget.gamma_cc * fresh, hat, cfg.p_c, cfg.n_c))
    exact_rates = cols['r_cr'][regime]

    alpha_cdf = analytic_alpha_hat_cdf(cfg, budget)
    analytic = np.array([cr_rate_cdf(float(x), budget, alpha_cdf, cfg.fading_cc) for x in grid])
    mc_hat, mc_hat_se = empirical_cdf(hat_rates, grid)
    mc_exact, mc_exact_se = empirical_cdf(exact_rates, grid)
    return FrozenRateCdf(
        index=index,
        gains=gains,
        budget=budget,
        grid=grid,
        analytic=analytic,
        mc_hat=mc_hat,
        mc_hat_std_error=mc_hat_se,
        mc_exact=mc_exact,
        mc_exact_std_error=mc_exact_se,
        n_hat=len(hat),
        ks_hat_vs_exact=float(stats.ks_2samp(hat_rates, exact_rates).statistic),
    )
