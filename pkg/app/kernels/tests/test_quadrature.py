"""
Tests for the panel quadrature helpers.
"""
import math

import numpy as np
from django.test import SimpleTestCase

from kernels import quadrature


class WholeLineRadiusTests(SimpleTestCase):
    """Test the integration window for oscillator integrands."""

    def test_oscillator_window(self):
        """Test R = span / sqrt(kappa tanh(kappa t / 2))."""
        radius = quadrature.whole_line_radius(2.0, 0.5)
        expected = quadrature.GAUSSIAN_SPAN / math.sqrt(2.0 * math.tanh(0.5))

        self.assertAlmostEqual(radius, expected, places=12)

    def test_free_window(self):
        """Test kappa = 0 uses the heat kernel width sqrt(2t)."""
        radius = quadrature.whole_line_radius(0.0, 2.0)

        self.assertAlmostEqual(radius, 2.0 * quadrature.GAUSSIAN_SPAN)

    def test_window_covers_box(self):
        """Test the window is never narrower than L."""
        self.assertEqual(quadrature.whole_line_radius(1.0, 1.0, L=100.0),
                         100.0)

    def test_window_holds_the_mass(self):
        """Test the diagonal Gaussian outside the window is negligible."""
        kappa, t = 1.5, 0.8
        a = kappa * math.tanh(kappa * t / 2.0)
        radius = quadrature.whole_line_radius(kappa, t)
        inside = quadrature.integrate(lambda x: np.exp(-a * x ** 2),
                                      -radius, radius)

        self.assertAlmostEqual(inside, math.sqrt(math.pi / a), delta=1e-12)


class IntegrateTests(SimpleTestCase):
    """Test adaptive Gauss-Legendre integration."""

    def test_polynomial_is_exact(self):
        """Test a cubic integrates exactly on one panel."""
        value = quadrature.integrate(lambda x: x ** 3 - 2.0 * x, 0.0, 2.0)

        self.assertAlmostEqual(value, 0.0, places=13)

    def test_reversed_limits_change_sign(self):
        """Test integrating from b to a negates the integral."""
        forward = quadrature.integrate(np.exp, 0.0, 1.0)
        backward = quadrature.integrate(np.exp, 1.0, 0.0)

        self.assertEqual(forward, -backward)
        self.assertAlmostEqual(forward, math.e - 1.0, places=13)

    def test_narrow_gaussian_over_real_line(self):
        """Test integrate_gaussian finds sqrt(pi) w for a narrow peak."""
        width = 1e-3
        value = quadrature.integrate_gaussian(
            lambda z: np.exp(-((z - 0.3) / width) ** 2), center=0.3,
            width=width)

        self.assertAlmostEqual(value / (math.sqrt(math.pi) * width), 1.0,
                               places=10)
