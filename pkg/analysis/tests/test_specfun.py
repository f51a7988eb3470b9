import math

import numpy as np
from django.test import SimpleTestCase

from analysis.exceptions import ConvergenceError, DomainError
from analysis.specfun import (
    K1_SERIES_CUTOFF,
    QuadratureSpec,
    beta_fn,
    bessel_k1,
    bessel_k1_complement,
    integrate,
    normal_cdf,
)


class NormalCdfTests(SimpleTestCase):

    def test_reference_values(self):
        self.assertEqual(normal_cdf(0.0), 0.5)
        self.assertEqual(normal_cdf(math.inf), 1.0)
        self.assertEqual(normal_cdf(-math.inf), 0.0)
        self.assertAlmostEqual(normal_cdf(1.0), 0.8413447460685429, places=14)

    def test_symmetry(self):
        for z in (0.3, 1.7, 4.2, 9.0):
            self.assertAlmostEqual(normal_cdf(-z), 1.0 - normal_cdf(z), delta=1e-14)

    def test_deep_tail_keeps_relative_accuracy(self):
        # Phi(-10) is about 7.62e-24, far below double epsilon relative to 1
        self.assertAlmostEqual(normal_cdf(-10.0) / 7.6198530241604696e-24, 1.0, places=10)


class BesselK1Tests(SimpleTestCase):

    def test_reference_value(self):
        self.assertAlmostEqual(bessel_k1(1.0), 0.6019072301972346, places=14)

    def test_small_argument_limit(self):
        z = 1e-8
        self.assertAlmostEqual(z * bessel_k1(z), 1.0, delta=1e-6)

    def test_strictly_decreasing(self):
        self.assertLess(bessel_k1(2.0), bessel_k1(1.0))

    def test_nonpositive_argument_rejected(self):
        for z in (0.0, -1.0):
            with self.assertRaises(DomainError):
                bessel_k1(z)


class BesselK1ComplementTests(SimpleTestCase):

    def test_matches_direct_form_where_it_is_stable(self):
        for z in (0.5, 0.9, 2.0, 6.0):
            self.assertAlmostEqual(bessel_k1_complement(z), 1.0 - z * bessel_k1(z), delta=1e-14, msg=f"z={z}")

    def test_continuous_at_cutoff(self):
        below = bessel_k1_complement(K1_SERIES_CUTOFF - 1e-12)
        above = bessel_k1_complement(K1_SERIES_CUTOFF + 1e-12)
        self.assertAlmostEqual(below, above, delta=1e-11)

    def test_small_argument_keeps_relative_accuracy(self):
        z = 1e-8
        leading = z * z / 4.0 * (1.0 - 2.0 * np.euler_gamma - 2.0 * math.log(z / 2.0))
        self.assertAlmostEqual(bessel_k1_complement(z) / leading, 1.0, delta=1e-12)

    def test_zero_and_vector(self):
        self.assertEqual(bessel_k1_complement(0.0), 0.0)
        values = bessel_k1_complement(np.array([0.0, 1e-6, 0.3, 3.0]))
        self.assertEqual(values.shape, (4,))
        self.assertTrue(np.all(np.diff(values) > 0))

    def test_negative_rejected(self):
        with self.assertRaises(DomainError):
            bessel_k1_complement(-1e-3)


class BetaFnTests(SimpleTestCase):

    def test_reference_values(self):
        self.assertAlmostEqual(beta_fn(1.0, 1.0), 1.0, places=15)
        self.assertAlmostEqual(beta_fn(2.0, 3.0), 1.0 / 12.0, places=15)
        self.assertAlmostEqual(beta_fn(0.5, 0.5), math.pi, places=13)

    def test_symmetric(self):
        self.assertAlmostEqual(beta_fn(2.5, 7.0), beta_fn(7.0, 2.5), places=15)

    def test_nonpositive_rejected(self):
        with self.assertRaises(DomainError):
            beta_fn(0.0, 1.0)
        with self.assertRaises(DomainError):
            beta_fn(1.0, -2.0)


class IntegrateTests(SimpleTestCase):

    def test_constant(self):
        self.assertAlmostEqual(integrate(lambda v: 1.0, 0.0, 1.0), 1.0, places=12)

    def test_arctangent_identity(self):
        self.assertAlmostEqual(integrate(lambda v: 4.0 / (1.0 + v * v), 0.0, 1.0), math.pi, places=10)

    def test_infinite_upper_limit(self):
        self.assertAlmostEqual(integrate(lambda v: math.exp(-v), 0.0, math.inf), 1.0, places=9)
        self.assertAlmostEqual(integrate(lambda v: math.exp(-v), 2.0, math.inf), math.exp(-2.0), places=10)

    def test_breakpoints_on_infinite_range(self):
        value = integrate(lambda v: 1.0 if v < 3.0 else 0.0, 0.0, math.inf, points=(3.0,))
        self.assertAlmostEqual(value, 3.0, places=8)

    def test_reversed_and_empty_ranges(self):
        self.assertEqual(integrate(math.sin, 1.0, 1.0), 0.0)
        self.assertAlmostEqual(integrate(lambda v: v, 1.0, 0.0), -0.5, places=12)

    def test_infinite_lower_limit_rejected(self):
        with self.assertRaises(DomainError):
            integrate(math.exp, -math.inf, 0.0)

    def test_subdivision_budget_exhausted(self):
        with self.assertRaises(ConvergenceError) as ctx:
            integrate(lambda v: math.cos(400.0 * v), 0.0, 1.0, QuadratureSpec(max_subdivisions=1))
        self.assertIsNotNone(ctx.exception.estimate)
        self.assertGreater(ctx.exception.error_bound, 0.0)

    def test_spec_validation(self):
        with self.assertRaises(DomainError):
            QuadratureSpec(abs_tol=0.0)
        with self.assertRaises(DomainError):
            QuadratureSpec(rel_tol=-1.0)
        with self.assertRaises(DomainError):
            QuadratureSpec(max_subdivisions=0)


# (integrand, lower, upper, exact value)
REFERENCE_INTEGRALS = [
    (lambda v: v * v, 0.0, 1.0, 1.0 / 3.0),
    (lambda v: v ** 3, 0.0, 2.0, 4.0),
    (math.sin, 0.0, math.pi, 2.0),
    (math.cos, 0.0, math.pi / 2.0, 1.0),
    (math.exp, 0.0, 1.0, math.e - 1.0),
    (lambda v: 1.0 / v, 1.0, math.e, 1.0),
    (lambda v: 1.0 / (1.0 + v * v), 0.0, math.inf, math.pi / 2.0),
    (lambda v: math.exp(-v * v), 0.0, math.inf, math.sqrt(math.pi) / 2.0),
    (lambda v: v * math.exp(-v), 0.0, math.inf, 1.0),
    (lambda v: 1.0 / math.sqrt(v), 0.0, 1.0, 2.0),
    (math.log, 0.0, 1.0, -1.0),
    (lambda v: math.sqrt(1.0 - v * v), 0.0, 1.0, math.pi / 4.0),
    (lambda v: 1.0 / (1.0 + v) ** 2, 0.0, math.inf, 1.0),
    (lambda v: v * v * math.exp(-v), 0.0, math.inf, 2.0),
    (lambda v: math.sin(v) ** 2, 0.0, math.pi, math.pi / 2.0),
    (lambda v: math.exp(-2.0 * v), 1.0, math.inf, math.exp(-2.0) / 2.0),
    (lambda v: 1.0 / (v * v), 1.0, math.inf, 1.0),
    (math.cosh, 0.0, 1.0, math.sinh(1.0)),
    (lambda v: v ** 4, -1.0, 1.0, 0.4),
    (lambda v: math.exp(-v) * math.sin(v), 0.0, math.inf, 0.5),
]


class IntegrateReferenceTests(SimpleTestCase):

    def test_reference_integrals(self):
        for i, (f, a, b, exact) in enumerate(REFERENCE_INTEGRALS):
            self.assertAlmostEqual(integrate(f, a, b), exact, delta=1e-8, msg=f"case {i} on [{a}, {b}]")

    def test_integrable_endpoint_singularity(self):
        self.assertAlmostEqual(integrate(lambda v: v ** -0.5, 0.0, 1.0), 2.0, delta=1e-8)

    def test_linear(self):
        combined = integrate(lambda v: 2.0 * math.sin(v) + 3.0 * math.exp(v), 0.0, 2.0)
        separate = 2.0 * integrate(math.sin, 0.0, 2.0) + 3.0 * integrate(math.exp, 0.0, 2.0)
        self.assertAlmostEqual(combined, separate, delta=1e-9)
