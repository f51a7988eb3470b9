import math

import numpy as np
from django.test import SimpleTestCase
from scipy import stats

from analysis.exceptions import DomainError, InvalidGeometryError
from analysis.geometry import (
    PIECE_COUNT,
    Geometry,
    piecewise_coefficients,
    ratio_cdf,
    ratio_cdf_by_conditioning,
    sample_annulus_distance,
)

DEFAULT = Geometry()
WIDE_CR_CELL = Geometry(r0=1.0, rc=1500.0, rp=1000.0)
SHARED_CELL = Geometry(r0=1.0, rc=1000.0, rp=1000.0)


class GeometryTests(SimpleTestCase):

    def test_defaults(self):
        self.assertEqual((DEFAULT.r0, DEFAULT.rc, DEFAULT.rp), (1.0, 100.0, 1000.0))
        self.assertEqual(DEFAULT.delta, (100.0 ** 2 - 1.0) * (1000.0 ** 2 - 1.0))

    def test_invalid_radii(self):
        for radii in ((0.0, 100.0, 1000.0), (100.0, 100.0, 1000.0), (10.0, 100.0, 5.0), (-1.0, 1.0, 2.0)):
            with self.assertRaises(InvalidGeometryError):
                Geometry(*radii)

    def test_invalid_geometry_is_a_domain_error(self):
        self.assertTrue(issubclass(InvalidGeometryError, DomainError))


class PiecewiseCoefficientTests(SimpleTestCase):

    def test_breakpoints(self):
        cdf = piecewise_coefficients(DEFAULT)
        self.assertEqual(cdf.thetas, (0.0, 0.001, 0.1, 1.0, 100.0, math.inf))

    def test_outer_pieces(self):
        cdf = piecewise_coefficients(DEFAULT)
        np.testing.assert_array_equal(cdf.coeffs[0], [0.0, 0.0, 0.0])
        np.testing.assert_allclose(cdf.coeffs[PIECE_COUNT - 1], [0.0, 1.0, 0.0], atol=1e-15)

    def test_published_coefficients(self):
        r0, rc, rp = DEFAULT.r0, DEFAULT.rc, DEFAULT.rp
        delta = DEFAULT.delta
        expected = np.array([
            [0.0, 0.0, 0.0],
            [0.5 * r0 ** 4, -r0 ** 2 * rp ** 2, 0.5 * rp ** 4],
            [0.5 * (r0 ** 4 - rc ** 4), rp ** 2 * (rc ** 2 - r0 ** 2), 0.0],
            [-0.5 * rc ** 4, delta + r0 ** 2 * rc ** 2, -0.5 * r0 ** 4],
            [0.0, delta, 0.0],
        ]) / delta
        np.testing.assert_allclose(piecewise_coefficients(DEFAULT).coeffs, expected, rtol=1e-12, atol=1e-18)

    def test_first_and_last_inner_breakpoints(self):
        for geom in (DEFAULT, WIDE_CR_CELL, Geometry(r0=2.0, rc=30.0, rp=400.0)):
            cdf = piecewise_coefficients(geom)
            self.assertEqual(cdf(geom.r0 / geom.rp), 0.0)
            self.assertAlmostEqual(cdf(geom.rc / geom.r0), 1.0, places=12)

    def test_continuous_at_breakpoints(self):
        for geom in (DEFAULT, WIDE_CR_CELL, SHARED_CELL):
            cdf = piecewise_coefficients(geom)
            for i in range(1, PIECE_COUNT):
                theta = cdf.thetas[i]
                left = cdf.evaluate_piece(i - 1, theta)
                right = cdf.evaluate_piece(i, theta)
                self.assertAlmostEqual(left, right, places=12, msg=f"{geom} at theta={theta}")

    def test_breakpoint_belongs_to_left_piece(self):
        cdf = piecewise_coefficients(DEFAULT)
        self.assertEqual(cdf.piece_index(0.1), 1)
        self.assertEqual(cdf.piece_index(0.1000001), 2)

    def test_rejects_non_geometry(self):
        with self.assertRaises(InvalidGeometryError):
            piecewise_coefficients((1.0, 100.0, 1000.0))


class RatioCdfTests(SimpleTestCase):

    def test_outside_support(self):
        self.assertEqual(ratio_cdf(0.0005, DEFAULT), 0.0)
        self.assertEqual(ratio_cdf(0.0, DEFAULT), 0.0)
        self.assertEqual(ratio_cdf(200.0, DEFAULT), 1.0)
        self.assertEqual(ratio_cdf(math.inf, DEFAULT), 1.0)

    def test_negative_rejected(self):
        with self.assertRaises(DomainError):
            ratio_cdf(-0.1, DEFAULT)

    def test_monotone(self):
        grid = np.geomspace(1e-4, 1e3, 400)
        values = [ratio_cdf(x, DEFAULT) for x in grid]
        self.assertTrue(all(b >= a - 1e-14 for a, b in zip(values, values[1:])))
        self.assertTrue(all(0.0 <= v <= 1.0 + 1e-12 for v in values))

    def test_shared_cell_is_symmetric(self):
        self.assertAlmostEqual(ratio_cdf(1.0, SHARED_CELL), 0.5, places=12)

    def test_matches_conditioning_integral(self):
        for geom in (DEFAULT, WIDE_CR_CELL, SHARED_CELL):
            for x in (0.002, 0.05, 0.1, 0.5, 1.0, 1.4, 3.0, 20.0, 90.0, 1200.0):
                self.assertAlmostEqual(ratio_cdf(x, geom), ratio_cdf_by_conditioning(x, geom),
                                       delta=1e-8, msg=f"{geom} at x={x}")

    def test_matches_sampled_distances(self):
        rng = np.random.default_rng(20090601)
        n = 2_000_000
        r_cc = sample_annulus_distance(DEFAULT.r0, DEFAULT.rc, rng, n)
        r_cp = sample_annulus_distance(DEFAULT.r0, DEFAULT.rp, rng, n)
        for x in (0.05, 0.1, 0.3, 1.0):
            empirical = np.mean(r_cc / r_cp < x)
            expected = ratio_cdf(x, DEFAULT)
            std_error = math.sqrt(expected * (1.0 - expected) / n)
            self.assertLess(abs(empirical - expected), 3.0 * std_error + 1e-12, msg=f"x={x}")


class SampleAnnulusDistanceTests(SimpleTestCase):

    def test_median(self):
        rng = np.random.default_rng(1)
        draws = sample_annulus_distance(1.0, 100.0, rng, 1_000_000)
        self.assertAlmostEqual(np.median(draws) / math.sqrt((1.0 + 10000.0) / 2.0), 1.0, delta=0.005)

    def test_support(self):
        rng = np.random.default_rng(2)
        draws = sample_annulus_distance(1.0, 100.0, rng, 100_000)
        self.assertTrue(np.all((draws >= 1.0) & (draws <= 100.0)))

    def test_scalar_draw(self):
        value = sample_annulus_distance(1.0, 100.0, np.random.default_rng(3))
        self.assertTrue(1.0 <= float(value) <= 100.0)

    def test_area_uniform(self):
        r_in, r_out = 1.0, 100.0
        draws = sample_annulus_distance(r_in, r_out, np.random.default_rng(4), 1_000_000)
        result = stats.kstest(draws, lambda r: (r * r - r_in ** 2) / (r_out ** 2 - r_in ** 2))
        self.assertLess(result.statistic, 0.0025)

    def test_invalid_annulus(self):
        with self.assertRaises(DomainError):
            sample_annulus_distance(5.0, 5.0, np.random.default_rng(0))
