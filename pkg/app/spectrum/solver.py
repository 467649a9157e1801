"""
Eigenvalues of the one-dimensional oscillator in a Dirichlet box.

The Hamiltonian -1/2 d^2/dx^2 + 1/2 kappa^2 x^2 on (-L/2, L/2) is
discretized by second-order central differences on n interior nodes and
the lowest eigenvalues of the tridiagonal matrix are extrapolated to zero
spacing from the grids n and 2n + 1. The same extrapolation from 2n + 1
and 4n + 3 measures how far the first one is from converged.
"""
import logging
import math
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from core.exceptions import ConvergenceError, DomainError
from core.models import Discretization, EigenSpectrum

logger = logging.getLogger(__name__)

# Relative error above which an extrapolated eigenvalue is not trusted.
CONVERGENCE_THRESHOLD = 1e-4
# Only the lowest n / RESOLVED_FRACTION modes are resolved by the grid.
RESOLVED_FRACTION = 4
# Error bars are this multiple of the change between the two
# extrapolations, which tracks the h^4 error of the coarser one.
ERROR_SAFETY = 2.0


def ho_eigenvalue(s, kappa):
    """Whole-line oscillator eigenvalue kappa (s + 1/2)."""
    if s < 0:
        raise DomainError(f'Level index must be >= 0, got {s}.')
    if not kappa > 0:
        raise DomainError(f'kappa must be > 0, got {kappa}.')
    return kappa * (s + 0.5)


def multidim_ho_eigenvalue(levels, kappa):
    """Eigenvalue of the d-dimensional oscillator for levels (s_1..s_d)."""
    return sum(ho_eigenvalue(s, kappa) for s in levels)


def box_eigenvalue_free(k, box):
    """Dirichlet Laplacian eigenvalue k^2 pi^2 / (2 L^2), k >= 1."""
    if k < 1:
        raise DomainError(f'Box mode index must be >= 1, got {k}.')
    return k * k * math.pi ** 2 / (2.0 * box.L ** 2)


@lru_cache(maxsize=128)
def _grid_eigenvalues(L, kappa, n, count):
    h = L / (n + 1)
    nodes = -L / 2.0 + h * np.arange(1, n + 1)
    diagonal = 1.0 / h ** 2 + 0.5 * kappa ** 2 * nodes ** 2
    off_diagonal = np.full(n - 1, -0.5 / h ** 2)
    logger.debug('tridiagonal solve L=%g kappa=%g n=%d count=%d',
                 L, kappa, n, count)
    values = eigh_tridiagonal(diagonal, off_diagonal, eigvals_only=True,
                              select='i', select_range=(0, count - 1))
    values.setflags(write=False)
    return values


def grid_eigenvalues(spec, disc, count):
    """Lowest count eigenvalues of the finite-difference matrix itself."""
    return _grid_eigenvalues(float(spec.box.L), float(spec.kappa), disc.n,
                             count)


def _richardson(coarse, fine):
    """Cancel the h^2 term between grids whose spacing differs by 2."""
    return (4.0 * fine - coarse) / 3.0


def box_oscillator_eigs(spec, disc=Discretization(), count=10):
    """Richardson-extrapolated lowest eigenvalues with error estimates.

    Raises ConvergenceError when count exceeds n / 4. Eigenvalues whose
    error estimate exceeds 1e-4 of their value mark the spectrum as not
    converged.
    """
    if count < 1:
        raise DomainError(f'count must be >= 1, got {count}.')
    if count > disc.n // RESOLVED_FRACTION:
        raise ConvergenceError(
            f'{count} eigenvalues cannot be resolved with n={disc.n}; '
            f'use n >= {RESOLVED_FRACTION * count}.'
        )

    coarse = grid_eigenvalues(spec, disc, count)
    fine = grid_eigenvalues(spec, disc.refined(), count)
    finest = grid_eigenvalues(spec, disc.refined().refined(), count)
    extrapolated = _richardson(coarse, fine)
    errors = ERROR_SAFETY * np.abs(extrapolated - _richardson(fine, finest))

    converged = bool(np.all(errors <= CONVERGENCE_THRESHOLD
                            * np.abs(extrapolated)))
    if not converged:
        logger.warning(
            'eigenvalues not converged for L=%g kappa=%g n=%d; '
            'increase n', spec.box.L, spec.kappa, disc.n,
        )
    return EigenSpectrum(values=extrapolated, errors=errors,
                         converged=converged, spec=spec, disc=disc)


def ground_state(spectrum, d=1):
    """Ground-state energy of the d-dimensional cube, d * epsilon_1."""
    return d * spectrum.ground
