import math

from django.test import SimpleTestCase

from analysis.exceptions import DomainError
from analysis.fading import RatioScenario, ShadowingParams, db_to_linear, ratio_pdf_scalar
from analysis.geometry import Geometry
from analysis.lowint import LowIntConfig, integral_I, prob_low_interference
from analysis.models import ScenarioName
from analysis.specfun import integrate

K_5DB = db_to_linear(5.0)

SCENARIOS = [
    RatioScenario(ScenarioName.RAYRAY),
    RatioScenario(ScenarioName.RAYRIC, K_5DB),
    RatioScenario(ScenarioName.RICRAY, K_5DB),
    RatioScenario(ScenarioName.RICRIC, K_5DB),
]


class IntegralITests(SimpleTestCase):

    def test_full_range_is_total_probability(self):
        for scenario in SCENARIOS:
            cfg = LowIntConfig(scenario=scenario)
            self.assertAlmostEqual(integral_I(0, 0.0, math.inf, cfg), 1.0, delta=1e-6, msg=scenario.name)

    def test_adjacent_ranges_add_up(self):
        cfg = LowIntConfig(scenario=SCENARIOS[3])
        whole = integral_I(1, 0.1, 10.0, cfg)
        split = integral_I(1, 0.1, 1.0, cfg) + integral_I(1, 1.0, 10.0, cfg)
        self.assertAlmostEqual(whole, split, delta=1e-8)

    def test_vanishing_shadowing_limit(self):
        # Without shadowing W = (K / Y)^(1/gamma), so theta <= W <= kappa is a range of y
        theta, kappa, gamma, noise_ratio = 0.5, 2.0, 3.5, 1.0
        for scenario in SCENARIOS:
            for m in (-1, 0, 1):
                def weighted(y):
                    return (noise_ratio / y) ** (2.0 * m / gamma) * ratio_pdf_scalar(scenario, y)

                direct = integrate(weighted, noise_ratio / kappa ** gamma, noise_ratio / theta ** gamma)
                for sigma_db in (0.0, 0.01):
                    cfg = LowIntConfig(shadowing=ShadowingParams(sigma_db), scenario=scenario, gamma=gamma)
                    self.assertAlmostEqual(integral_I(m, theta, kappa, cfg), direct, delta=1e-4,
                                           msg=f"{scenario.name} m={m} sigma={sigma_db}")

    def test_invalid_arguments(self):
        cfg = LowIntConfig()
        with self.assertRaises(DomainError):
            integral_I(2, 0.0, 1.0, cfg)
        with self.assertRaises(DomainError):
            integral_I(0, 1.0, 1.0, cfg)
        with self.assertRaises(DomainError):
            LowIntConfig(gamma=0.0)
        with self.assertRaises(DomainError):
            LowIntConfig(noise_ratio=-1.0)


class ProbLowInterferenceTests(SimpleTestCase):

    def test_shared_cell_gives_one_half(self):
        shared = Geometry(r0=1.0, rc=1000.0, rp=1000.0)
        for scenario in (SCENARIOS[0], SCENARIOS[3]):
            cfg = LowIntConfig(geom=shared, scenario=scenario)
            self.assertAlmostEqual(prob_low_interference(cfg), 0.5, delta=1e-3, msg=scenario.name)

    def test_defaults_are_dominated_by_low_interference(self):
        for scenario in SCENARIOS:
            self.assertGreater(prob_low_interference(LowIntConfig(scenario=scenario)), 0.9, msg=scenario.name)

    def test_decreases_with_shadowing(self):
        for scenario in SCENARIOS:
            values = [
                prob_low_interference(LowIntConfig(shadowing=ShadowingParams(sigma), scenario=scenario))
                for sigma in (4.0, 6.0, 8.0, 10.0, 12.0)
            ]
            for lower, higher in zip(values, values[1:]):
                self.assertGreaterEqual(lower, higher, msg=scenario.name)
            self.assertGreater(values[0], values[-1])

    def test_nondecreasing_with_path_loss_exponent(self):
        values = [prob_low_interference(LowIntConfig(gamma=gamma)) for gamma in (2.5, 3.0, 3.5, 4.0)]
        for lower, higher in zip(values, values[1:]):
            self.assertLessEqual(lower, higher)

    def test_is_a_probability_for_wide_cr_cell(self):
        cfg = LowIntConfig(geom=Geometry(r0=1.0, rc=1500.0, rp=1000.0), scenario=SCENARIOS[0])
        value = prob_low_interference(cfg)
        self.assertGreater(value, 0.0)
        self.assertLess(value, 0.5)

    def test_noise_ratio_favours_the_regime(self):
        quiet_cr = LowIntConfig(noise_ratio=10.0)
        self.assertGreater(prob_low_interference(quiet_cr), prob_low_interference(LowIntConfig()))
