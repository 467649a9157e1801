"""
Traces of the oscillator semigroup on the whole space and in a box.

All cube quantities tensorize: a d-dimensional trace is the d-th power
of the one-dimensional trace and errors are propagated through the power.
"""
import logging
import math

import numpy as np
from scipy.special import erfc, erfcx

from core.exceptions import ConvergenceError, DomainError
from core.models import (
    Discretization,
    OscillatorParams,
    TimePoint,
    TraceDifference,
    TraceReport,
)
from kernels import kernels
from kernels.quadrature import integrate
from oracle import dense
from spectrum import solver

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
NOISE_FLOOR_FACTOR = 10.0
INITIAL_EIGENCOUNT = 16
ROUNDING = 4.0 * np.finfo(float).eps


def _time(t):
    return TimePoint(float(t)).t


def _require_oscillator(kappa):
    if not kappa > 0:
        raise DomainError(
            f'kappa must be > 0 for the whole-space trace, got {kappa}.'
        )


def log_trace_infinite(t, p):
    """log of (2 sinh(kappa t / 2))^(-d)."""
    t = _time(t)
    _require_oscillator(p.kappa)
    return -p.d * (math.log(2.0) + float(kernels.log_sinh(p.kappa * t / 2.0)))


def trace_infinite(t, p):
    """Whole-space oscillator trace, (2 sinh(kappa t/2))^-d."""
    return math.exp(log_trace_infinite(t, p))


def trace_infinite_geometric(t, p):
    """Same trace as exp(-E_0 t) / (1 - exp(-kappa t))^d."""
    t = _time(t)
    _require_oscillator(p.kappa)
    return math.exp(-p.ground_energy * t
                    - p.d * math.log1p(-math.exp(-p.kappa * t)))


def hilbert_schmidt_norm_sq(t, p):
    """Squared Hilbert-Schmidt norm (2 sinh(kappa t))^(-d) of G(t)."""
    return trace_infinite(2.0 * _time(t), p)


def truncation_tail(t, L, kappa, used):
    """Bound on sum_{k > used} exp(-t epsilon_k) for the box spectrum.

    Uses epsilon_k >= k^2 pi^2 / (2 L^2) from the free box and, for
    kappa > 0, epsilon_k >= kappa (k - 1/2) from the whole line.
    """
    rate = t * math.pi ** 2 / (2.0 * L * L)
    root = math.sqrt(rate)
    bound = 0.5 * math.sqrt(math.pi) / root * erfc(used * root)
    if kappa > 0:
        decay = math.exp(-t * kappa)
        bound = min(bound, math.exp(-t * kappa * (used + 0.5))
                    / (1.0 - decay))
    return bound


def trace_from_spectrum(t, spectrum, tol=DEFAULT_TOL):
    """One-dimensional trace sum_k exp(-t epsilon_k) with error bounds.

    Terms are added until the tail bound drops below tol times the
    partial sum. Raises ConvergenceError if the spectrum runs out first.
    """
    t = _time(t)
    L = spectrum.spec.box.L
    kappa = spectrum.spec.kappa
    weights = np.exp(-t * spectrum.values)
    partial = np.cumsum(weights)
    for used in range(1, spectrum.count + 1):
        tail = truncation_tail(t, L, kappa, used)
        if tail < tol * partial[used - 1]:
            break
    else:
        raise ConvergenceError(
            f'{spectrum.count} eigenvalues leave a tail of {tail:.3e} at '
            f'L={L} t={t}; increase the eigenvalue count or n.'
        )

    propagated = float(np.sum(weights[:used] * t * spectrum.errors[:used]))
    logger.debug('trace at L=%g t=%g used %d eigenvalues', L, t, used)
    return TraceReport(value=float(partial[used - 1]), truncation_error=tail,
                       eigencount_used=used, discretization_error=propagated)


def tensorize(report, d):
    """Raise a one-dimensional TraceReport to the d-th power."""
    if d == 1:
        return report
    value = report.value ** d
    truncated = (report.value + report.truncation_error) ** d - value
    total = (report.value + report.error) ** d - value
    return TraceReport(value=value, truncation_error=truncated,
                       eigencount_used=report.eigencount_used,
                       discretization_error=total - truncated)


def trace_finite(t, spec, d=1, tol=DEFAULT_TOL, disc=Discretization()):
    """Trace of the box semigroup, grown over the spectrum until tol is met.

    The eigenvalue count doubles from 16 up to n / 4; past that the
    refusal asks for a larger n.
    """
    t = _time(t)
    limit = disc.n // solver.RESOLVED_FRACTION
    count = min(INITIAL_EIGENCOUNT, limit)
    while True:
        spectrum = solver.box_oscillator_eigs(spec, disc, count)
        try:
            report = trace_from_spectrum(t, spectrum, tol)
            break
        except ConvergenceError:
            if count >= limit:
                raise ConvergenceError(
                    f'tol={tol} needs more than {limit} eigenvalues at '
                    f'L={spec.box.L} t={t}; increase n above {disc.n}.'
                )
            count = min(2 * count, limit)
    return tensorize(report, d)


def z_term(t, spec, d=1):
    """Exterior part of the trace difference, exact.

    In one dimension Z = T erfc(u) with u = sqrt(kappa tanh(kappa t/2)) L/2
    and T the whole-space trace; in d dimensions Z = T^d (1 - erf(u)^d).
    """
    t = _time(t)
    _require_oscillator(spec.kappa)
    u = (math.sqrt(spec.kappa * math.tanh(spec.kappa * t / 2.0))
         * spec.box.L / 2.0)
    log_erfc = math.log(erfcx(u)) - u * u
    log_trace = log_trace_infinite(t, OscillatorParams(spec.kappa, d))
    if d == 1:
        return math.exp(log_trace + log_erfc)
    # 1 - (1 - erfc)^d without cancellation
    fraction = -math.expm1(d * math.log1p(-math.exp(log_erfc)))
    return math.exp(log_trace) * fraction


def trace_difference(t, spec, d=1, tol=DEFAULT_TOL, disc=Discretization(),
                     noise_factor=NOISE_FLOOR_FACTOR):
    """Tr_inf - Tr_L with its interior (y) and exterior (z) parts.

    Differences smaller than noise_factor times their error are flagged
    as below the noise floor.
    """
    t = _time(t)
    _require_oscillator(spec.kappa)
    infinite = trace_infinite(t, OscillatorParams(spec.kappa, d))
    finite = trace_finite(t, spec, d, tol, disc)
    delta = infinite - finite.value
    err_delta = finite.error + ROUNDING * infinite
    z = z_term(t, spec, d)
    err_z = ROUNDING * z
    y = delta - z
    err_y = err_delta + err_z

    noise_floor = noise_factor * err_delta
    below = abs(delta) < noise_floor
    if below:
        logger.warning('trace difference %.3e at L=%g is below the noise '
                       'floor %.3e', delta, spec.box.L, noise_floor)
    return TraceDifference(delta=delta, y_term=y, z_term=z,
                           err_delta=err_delta, err_y=err_y, err_z=err_z,
                           noise_floor=noise_floor, below_noise_floor=below)


def box_diagonal_integral(t, spec, tol=1e-12):
    """Integral over the box of the whole-space kernel diagonal."""
    t = _time(t)
    half = spec.box.half
    if spec.kappa == 0:
        return spec.box.L / math.sqrt(2.0 * math.pi * t)
    p = OscillatorParams(spec.kappa, 1)
    return integrate(lambda x: kernels.mehler_kernel(x, x, t, p),
                     -half, half, tol=tol)


def y_term_direct(t, spec, n=511):
    """Interior part of the trace difference from an independent pipeline.

    Integrates the whole-space diagonal over the box by quadrature and
    subtracts the box diagonal integrated over the nodes of dense grids
    n and 2n + 1, extrapolated to zero spacing. kappa = 0 is allowed.
    """
    t = _time(t)
    interior = box_diagonal_integral(t, spec)
    box_trace = dense.oracle_trace_extrapolated(t, spec, n)
    return TraceReport(value=interior - box_trace.value,
                       discretization_error=box_trace.error)
