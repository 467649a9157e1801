"""
Grand-canonical quantities of the ideal gas in an oscillator trap.

The single-particle partition function is the semigroup trace at t = beta
and the average particle number is sum_l z^l Phi(l beta).
"""
import logging
import math

import numpy as np

from bounds import theorem
from core.exceptions import ConvergenceError, DomainError
from core.models import (
    DirichletOscillatorSpec,
    Discretization,
    EnsembleParams,
    FiniteSizeReport,
    NumberSeriesReport,
    OscillatorParams,
)
from spectrum import solver
from traces import traces

logger = logging.getLogger(__name__)

SERIES_TOL = 1e-12
MAX_TERMS = 100000


def _require_trap(kappa):
    if not kappa > 0:
        raise DomainError(f'kappa must be > 0, got {kappa}.')


def _log(value):
    return math.log(value) if value > 0 else -math.inf


def partition_finite(beta, spec, d=1, tol=traces.DEFAULT_TOL,
                     disc=Discretization()):
    """Phi_L(beta), the box trace at t = beta."""
    _require_trap(spec.kappa)
    return traces.trace_finite(beta, spec, d, tol, disc)


def partition_infinite(beta, p):
    """Phi(beta) = exp(-beta E_0) / (1 - exp(-beta kappa))^d."""
    _require_trap(p.kappa)
    return traces.trace_infinite_geometric(beta, p)


def _ground_energy(kappa, d, L, disc):
    """Lower bound on the bottom of the d-particle spectrum."""
    if L is None:
        return d * kappa / 2.0
    spec = DirichletOscillatorSpec.create(L, kappa)
    spectrum = solver.box_oscillator_eigs(spec, disc, count=1)
    return d * spectrum.ground_lower


def avg_number(ens, kappa, d=1, L=None, tol=SERIES_TOL,
               disc=Discretization()):
    """Grand-canonical average number of particles.

    L=None is the infinite-volume gas. Terms are added until the tail
    majorant Phi(beta) z^(l+1) exp(-l beta E) / (1 - z exp(-beta E)), with
    E the ground energy, drops below tol.
    """
    _require_trap(kappa)
    ground = _ground_energy(kappa, d, L, disc)
    limit = math.exp(ens.beta * ground)
    if not ens.z < limit:
        raise DomainError(
            f'z={ens.z} is outside the convergence region '
            f'z < exp(beta inf spec) = {limit:.12g}.'
        )

    if L is None:
        p = OscillatorParams(kappa, d)

        def log_phi(beta):
            return traces.log_trace_infinite(beta, p), -math.inf
    else:
        spec = DirichletOscillatorSpec.create(L, kappa)

        def log_phi(beta):
            report = partition_finite(beta, spec, d, disc=disc)
            return _log(report.value), _log(report.error)

    # terms and tail live in logs; z^l overflows long before the tail
    # falls below tol near the edge of the convergence region
    log_z = math.log(ens.z)
    log_ratio = log_z - ens.beta * ground
    log_first, _ = log_phi(ens.beta)
    log_tol = math.log(tol)
    value = 0.0
    discretization = 0.0
    for terms in range(1, MAX_TERMS + 1):
        log_term, log_error = log_phi(terms * ens.beta)
        value += math.exp(terms * log_z + log_term)
        discretization += math.exp(terms * log_z + log_error)
        log_tail = (log_first + log_z + terms * log_ratio
                    - math.log(-math.expm1(log_ratio)))
        if log_tail < log_tol:
            break
    else:
        raise ConvergenceError(
            f'The number series did not reach tol={tol} in {MAX_TERMS} '
            f'terms at z={ens.z}.'
        )
    logger.debug('number series at z=%g used %d terms', ens.z, terms)
    return NumberSeriesReport(value=value, terms_used=terms,
                              tail_bound=math.exp(log_tail),
                              discretization_error=discretization)


def finite_size_scan(ens, kappa, L_values, d=1,
                     noise_factor=traces.NOISE_FLOOR_FACTOR,
                     disc=Discretization()):
    """Gaussian finite-size fits of Phi and N along a box-size ladder.

    Fits -ln|Phi_inf - Phi_L| and -ln|N_inf - N_L| against L^2 and L.
    The reported rates c are per L^2.
    """
    _require_trap(kappa)
    infinite = avg_number(ens, kappa, d)
    phi_gaps, phi_floors, number_gaps, number_floors = [], [], [], []
    for L in L_values:
        spec = DirichletOscillatorSpec.create(L, kappa)
        diff = traces.trace_difference(ens.beta, spec, d, disc=disc,
                                       noise_factor=noise_factor)
        phi_gaps.append(diff.delta)
        phi_floors.append(diff.noise_floor)
        finite = avg_number(ens, kappa, d, L, disc=disc)
        number_gaps.append(infinite.value - finite.value)
        number_floors.append(noise_factor * (infinite.error + finite.error))

    to_square = math.tanh(kappa * ens.beta / 2.0) / 4.0
    fits = {}
    for name, gaps, floors in (('partition', phi_gaps, phi_floors),
                               ('number', number_gaps, number_floors)):
        for abscissa in theorem.ABSCISSAE:
            fits[name, abscissa] = theorem.fit_decay(
                L_values, gaps, kappa, ens.beta, d, floors, abscissa)
    report = FiniteSizeReport(
        partition_rate=fits['partition', 'gaussian'].fitted_rate * to_square,
        number_rate=fits['number', 'gaussian'].fitted_rate * to_square,
        partition_rms_gaussian=fits['partition', 'gaussian'].residual_rms,
        partition_rms_exponential=fits['partition', 'linear'].residual_rms,
        number_rms_gaussian=fits['number', 'gaussian'].residual_rms,
        number_rms_exponential=fits['number', 'linear'].residual_rms,
        points_used=min(fit.points_used for fit in fits.values()),
    )
    if not report.gaussian_preferred:
        logger.warning('finite-size errors fit L no worse than L^2 at '
                       'beta=%g z=%g', ens.beta, ens.z)
    return report


def max_number_gap(L, grid, d=1, disc=Discretization()):
    """max |N_L - N_inf| over a grid of (kappa, beta, z) triples."""
    gaps = []
    for kappa, beta, z in grid:
        ens = EnsembleParams(beta, z)
        gaps.append(avg_number(ens, kappa, d).value
                    - avg_number(ens, kappa, d, L, disc=disc).value)
    return float(np.max(np.abs(gaps)))
