"""
Gaussian-decay bound on the trace difference and empirical decay fits.
"""
import logging
import math
from dataclasses import replace

import numpy as np

from core.exceptions import BelowNoiseFloorError, DomainError
from core.models import (
    DecayFitReport,
    DirichletOscillatorSpec,
    Discretization,
    OscillatorParams,
    TheoremCheck,
)
from traces import traces

logger = logging.getLogger(__name__)

THEOREM_RATE_DIVISOR = 32.0
# Operational floor: the bound is only claimed for L sqrt(kappa) >= 4.
L_FLOOR = 4.0
MIN_FIT_POINTS = 4
ABSCISSAE = ('gaussian', 'linear')


def gaussian_abscissa(L, kappa, t):
    """(L^2 / 4) tanh(kappa t / 2), the variable the bound decays in."""
    return np.asarray(L, dtype=float) ** 2 / 4.0 * math.tanh(kappa * t / 2.0)


def theorem_rate(kappa):
    return kappa / THEOREM_RATE_DIVISOR


def prefactor(inp):
    """(1 + sqrt(kappa)) (1 + kappa)^d (1 + t)^(3(d + 1/2))."""
    return ((1.0 + math.sqrt(inp.kappa)) * (1.0 + inp.kappa) ** inp.d
            * (1.0 + inp.t) ** (3.0 * (inp.d + 0.5)))


def theorem_rhs(inp):
    """Right-hand side of the bound for the constant carried by inp."""
    trace = traces.trace_infinite(inp.t, OscillatorParams(inp.kappa, inp.d))
    decay = math.exp(-theorem_rate(inp.kappa)
                     * float(gaussian_abscissa(inp.L, inp.kappa, inp.t)))
    return inp.constant * prefactor(inp) * trace * decay


def l_floor(kappa, floor=L_FLOOR):
    """Smallest box side for which the bound is checked."""
    if not kappa > 0:
        raise DomainError(f'kappa must be > 0, got {kappa}.')
    return floor / math.sqrt(kappa)


def require_l_floor(L, kappa, floor=L_FLOOR):
    minimum = l_floor(kappa, floor)
    if L < minimum:
        raise DomainError(
            f'L={L} is below the floor L >= {floor}/sqrt(kappa) = '
            f'{minimum:.6g}; the bound is only claimed for large boxes.'
        )


def assess(inp, diff):
    """Compare one computed trace difference with the bound.

    The margin is rhs / delta; points below the noise floor are refused.
    """
    if diff.below_noise_floor or diff.delta <= 0:
        raise BelowNoiseFloorError(
            f'delta={diff.delta:.3e} at L={inp.L} is below the noise floor '
            f'{diff.noise_floor:.3e}.'
        )
    rhs = theorem_rhs(inp)
    return TheoremCheck(holds=diff.delta <= rhs, delta=diff.delta, rhs=rhs,
                        margin=rhs / diff.delta, constant=inp.constant)


def check_theorem(inp, tol=traces.DEFAULT_TOL, disc=Discretization(),
                  floor=L_FLOOR, noise_factor=traces.NOISE_FLOOR_FACTOR):
    """Compute the trace difference at inp and check it against the bound."""
    require_l_floor(inp.L, inp.kappa, floor)
    spec = DirichletOscillatorSpec.create(inp.L, inp.kappa)
    diff = traces.trace_difference(inp.t, spec, inp.d, tol, disc,
                                   noise_factor)
    check = assess(inp, diff)
    if not check.holds:
        logger.warning('bound fails at L=%g: delta=%.3e rhs=%.3e',
                       inp.L, check.delta, check.rhs)
    return check


def fit_constant(inputs, deltas):
    """Smallest constant for which every delta lies below the bound.

    Rounded up by a few ulps so that the worst point itself passes.
    """
    ratios = [delta / theorem_rhs(replace(inp, constant=1.0))
              for inp, delta in zip(inputs, deltas)]
    if not ratios:
        raise BelowNoiseFloorError('No points to fit a constant to.')
    return max(ratios) * (1.0 + traces.ROUNDING)


def exterior_bound(t, spec, d=1):
    """Gaussian bound on the exterior term from erfc(u) <= exp(-u^2).

    Equals T exp(-kappa (L^2/4) tanh(kappa t/2)) in one dimension and
    T^d (1 - (1 - exp(-u^2))^d) <= d T^d exp(-u^2) in d dimensions.
    """
    u_sq = spec.kappa * float(gaussian_abscissa(spec.box.L, spec.kappa, t))
    trace = traces.trace_infinite(t, OscillatorParams(spec.kappa, d))
    return trace * -math.expm1(d * math.log1p(-math.exp(-u_sq)))


def fit_decay(L_values, deltas, kappa, t, d=1, noise_floors=None,
              abscissa='gaussian'):
    """Least-squares decay rate of -ln(delta).

    The gaussian abscissa is (L^2/4) tanh(kappa t/2), the linear one is
    L. Points at or below their noise floor are dropped; fewer than four
    remaining points are refused.
    """
    if abscissa not in ABSCISSAE:
        raise DomainError(f'abscissa must be one of {ABSCISSAE}.')
    L_values = np.asarray(L_values, dtype=float)
    deltas = np.asarray(deltas, dtype=float)
    floors = (np.zeros_like(deltas) if noise_floors is None
              else np.asarray(noise_floors, dtype=float))
    usable = (deltas > floors) & (deltas > 0)
    if usable.sum() < MIN_FIT_POINTS:
        raise BelowNoiseFloorError(
            f'Only {int(usable.sum())} points lie above the noise floor; '
            f'a decay fit needs {MIN_FIT_POINTS}.'
        )

    if abscissa == 'gaussian':
        x = gaussian_abscissa(L_values[usable], kappa, t)
    else:
        x = L_values[usable]
    ordinate = -np.log(deltas[usable])
    design = np.column_stack([np.ones_like(x), x])
    (intercept, rate), *_ = np.linalg.lstsq(design, ordinate, rcond=None)
    residuals = ordinate - design @ np.array([intercept, rate])
    rms = float(np.sqrt(np.mean(residuals ** 2)))
    logger.info('%s fit: rate=%.6g rms=%.3e over %d points', abscissa,
                rate, rms, int(usable.sum()))
    return DecayFitReport(
        fitted_rate=float(rate),
        theorem_rate=theorem_rate(kappa),
        intercept=float(intercept),
        residual_rms=rms,
        points_used=int(usable.sum()),
        expected_rate=kappa,
        mean_ordinate=float(np.mean(ordinate)),
        abscissa=abscissa,
    )
