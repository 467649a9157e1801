"""
Tests for the Dirichlet oscillator eigenvalue solver.
"""
import math

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import ConvergenceError, DomainError
from core.models import BoxGeometry, DirichletOscillatorSpec, Discretization
from spectrum import solver


def create_spec(L=3.0, kappa=1.0):
    """Create and return a box oscillator."""
    return DirichletOscillatorSpec.create(L, kappa)


class ClosedFormTests(SimpleTestCase):
    """Test the analytic reference spectra."""

    def test_oscillator_levels(self):
        """Test kappa (s + 1/2) for a few levels."""
        self.assertEqual(solver.ho_eigenvalue(0, 1.0), 0.5)
        self.assertEqual(solver.ho_eigenvalue(3, 2.0), 7.0)

    def test_multidimensional_level(self):
        """Test levels (1, 0, 2) at kappa = 1 sum to 4.5."""
        self.assertEqual(solver.multidim_ho_eigenvalue((1, 0, 2), 1.0), 4.5)

    def test_oscillator_rejects_bad_arguments(self):
        """Test negative levels and kappa <= 0 are rejected."""
        with self.assertRaises(DomainError):
            solver.ho_eigenvalue(-1, 1.0)
        with self.assertRaises(DomainError):
            solver.ho_eigenvalue(0, 0.0)

    def test_free_box_levels(self):
        """Test k^2 pi^2 / (2 L^2) at known points."""
        self.assertAlmostEqual(
            solver.box_eigenvalue_free(1, BoxGeometry(math.pi)), 0.5)
        self.assertAlmostEqual(
            solver.box_eigenvalue_free(2, BoxGeometry(1.0)),
            2 * math.pi ** 2)
        self.assertLess(solver.box_eigenvalue_free(1, BoxGeometry(1e8)),
                        1e-15)

    def test_free_box_index_must_be_positive(self):
        """Test k = 0 is rejected."""
        with self.assertRaises(DomainError):
            solver.box_eigenvalue_free(0, BoxGeometry(1.0))


class BoxOscillatorEigsTests(SimpleTestCase):
    """Test the extrapolated finite-difference spectrum."""

    def test_free_box_spectrum(self):
        """Test kappa = 0, L = 1 reproduces k^2 pi^2 / 2 to 1e-8."""
        spectrum = solver.box_oscillator_eigs(create_spec(1.0, 0.0),
                                              Discretization(1024), 3)
        expected = [solver.box_eigenvalue_free(k, BoxGeometry(1.0))
                    for k in (1, 2, 3)]

        for value, exact in zip(spectrum.values, expected):
            self.assertLess(abs(value - exact) / exact, 1e-8)
        self.assertTrue(spectrum.converged)
        self.assertEqual(spectrum.count, 3)

    def test_walls_invisible_in_large_box(self):
        """Test kappa = 1, L = 30 gives 0.5, 1.5, ..., 4.5 to 1e-8."""
        spectrum = solver.box_oscillator_eigs(create_spec(30.0, 1.0),
                                              Discretization(4096), 5)

        for s, value in enumerate(spectrum.values):
            self.assertLess(abs(value - (s + 0.5)) / (s + 0.5), 1e-8)

    def test_min_max_lower_bounds(self):
        """Test epsilon_1 >= max(kappa/2, pi^2 / 2L^2) at L = 2."""
        spectrum = solver.box_oscillator_eigs(create_spec(2.0, 1.0),
                                              count=1)

        self.assertGreaterEqual(spectrum.ground,
                                max(0.5, math.pi ** 2 / 8))

    def test_strictly_increasing(self):
        """Test the spectrum is simple."""
        spectrum = solver.box_oscillator_eigs(create_spec(4.0, 1.5),
                                              count=40)

        self.assertTrue(np.all(np.diff(spectrum.values) > 0))

    def test_domain_monotonicity(self):
        """Test every eigenvalue decreases as the box grows."""
        ladder = [2.0, 3.0, 4.0, 6.0, 8.0]
        spectra = [solver.box_oscillator_eigs(create_spec(L, 1.0), count=8)
                   for L in ladder]

        for smaller, larger in zip(spectra, spectra[1:]):
            self.assertTrue(np.all(larger.values <= smaller.values))

    def test_approaches_oscillator_levels(self):
        """Test epsilon_k(L) - kappa (k - 1/2) decays monotonically in L."""
        ladder = [2.0, 2.5, 3.0, 3.5, 4.0, 5.0]
        gaps = [solver.box_oscillator_eigs(create_spec(L, 1.0), count=3)
                .values - np.array([0.5, 1.5, 2.5]) for L in ladder]

        for before, after in zip(gaps, gaps[1:]):
            self.assertTrue(np.all(after < before))
            self.assertTrue(np.all(after > 0))

    def test_multidimensional_ground_state(self):
        """Test the tensorized ground state is at least d kappa / 2."""
        spectrum = solver.box_oscillator_eigs(create_spec(3.0, 2.0),
                                              count=1)

        for d in (1, 2, 3):
            self.assertGreaterEqual(solver.ground_state(spectrum, d), d)

    def test_refinements_agree_within_error_bars(self):
        """Test n and 2n + 1 based estimates agree within their errors."""
        spec = create_spec(3.0, 1.0)
        first = solver.box_oscillator_eigs(spec, Discretization(256), 10)
        second = solver.box_oscillator_eigs(spec, Discretization(513), 10)

        self.assertTrue(np.all(np.abs(first.values - second.values)
                               <= first.errors + second.errors))

    def test_error_bars_track_actual_error(self):
        """Test error bars cover the free-box error without inflating it."""
        box = BoxGeometry(1.0)
        spectrum = solver.box_oscillator_eigs(create_spec(1.0, 0.0),
                                              Discretization(64), 3)

        for k, value, error in zip((1, 2, 3), spectrum.values,
                                   spectrum.errors):
            actual = abs(value - solver.box_eigenvalue_free(k, box))
            self.assertLessEqual(actual, error)
            self.assertLess(error, 4.0 * actual)

    def test_too_many_eigenvalues_refused(self):
        """Test asking for more than n / 4 eigenvalues is refused."""
        with self.assertRaises(ConvergenceError) as context:
            solver.box_oscillator_eigs(create_spec(), Discretization(64), 17)

        self.assertIn('n >= 68', str(context.exception))

    def test_unresolved_spectrum_flagged(self):
        """Test a coarse grid marks high modes as not converged."""
        spectrum = solver.box_oscillator_eigs(create_spec(1.0, 0.0),
                                              Discretization(64), 16)

        self.assertFalse(spectrum.converged)

    def test_invalid_discretization(self):
        """Test grids below 64 nodes are rejected."""
        with self.assertRaises(DomainError):
            Discretization(32)
