"""
Hyperbolic identities and elementary inequalities behind the kernel
estimates.

Every check returns a Sides pair. For identities both sides must agree to
rounding; for inequalities lhs <= rhs must hold.
"""
import logging
import math
from collections import namedtuple

import numpy as np

from core.models import EstimateOutcome

logger = logging.getLogger(__name__)

IDENTITY_TOL = 1e-12
ALPHA_RANGE = (0.1, 3.0)
# alpha * t stays below 6 so that coth - tanh keeps full precision.
TIME_RANGE = (0.1, 2.0)
POWER_RANGE = (0.1, 3.0)
ABSCISSA_RANGE = (0.0, 20.0)

EQUAL = 'identity'
UPPER = 'inequality'

Sides = namedtuple('Sides', ['lhs', 'rhs'])
ConvolutionCoefficients = namedtuple('ConvolutionCoefficients',
                                     ['total', 'quadratic', 'cross'])


def _coth(u):
    return 1.0 / np.tanh(u)


def sinh_doubling(alpha, t):
    """sinh(at) = 2 sinh(at/2) cosh(at/2)."""
    u = alpha * t
    return Sides(np.sinh(u), 2.0 * np.sinh(u / 2.0) * np.cosh(u / 2.0))


def coth_half_angle(alpha, t):
    """coth(at) = (coth(at/2) + tanh(at/2)) / 2."""
    u = alpha * t
    return Sides(_coth(u), 0.5 * _coth(u / 2.0) + 0.5 * np.tanh(u / 2.0))


def coth_sum(alpha, t, s):
    """coth(as) + coth(a(t-s)) = sinh(at) / (sinh(as) sinh(a(t-s)))."""
    lhs = _coth(alpha * s) + _coth(alpha * (t - s))
    rhs = np.sinh(alpha * t) / (np.sinh(alpha * s) * np.sinh(alpha * (t - s)))
    return Sides(lhs, rhs)


def tanh_sum(alpha, t, s):
    """tanh(as) + tanh(a(t-s)) = sinh(at) / (cosh(as) cosh(a(t-s)))."""
    lhs = np.tanh(alpha * s) + np.tanh(alpha * (t - s))
    rhs = np.sinh(alpha * t) / (np.cosh(alpha * s) * np.cosh(alpha * (t - s)))
    return Sides(lhs, rhs)


def tanh_sum_product(alpha, t, s):
    """tanh(as) + tanh(a(t-s)) = tanh(at) (1 + tanh(as) tanh(a(t-s)))."""
    first = np.tanh(alpha * s)
    second = np.tanh(alpha * (t - s))
    return Sides(first + second,
                 np.tanh(alpha * t) * (1.0 + first * second))


def tanh_sum_lower(alpha, t, s):
    """tanh(at) <= tanh(as) + tanh(a(t-s))."""
    return Sides(np.tanh(alpha * t),
                 np.tanh(alpha * s) + np.tanh(alpha * (t - s)))


def coth_lower(alpha):
    """1/a <= coth(a)."""
    return Sides(1.0 / alpha, _coth(alpha))


def coth_upper(alpha):
    """coth(a) <= (1 + a)/a."""
    return Sides(_coth(alpha), (1.0 + alpha) / alpha)


def sinh_root(alpha, t):
    """(2 sinh(at))^(-1/2) = sqrt(tanh(at/2)) / (2 sinh(at/2))."""
    u = alpha * t
    return Sides(1.0 / np.sqrt(2.0 * np.sinh(u)),
                 np.sqrt(np.tanh(u / 2.0)) / (2.0 * np.sinh(u / 2.0)))


def sinh_root_bound(alpha, t):
    """(2 sinh(at))^(-1/2) <= 1 / (2 sinh(at/2))."""
    u = alpha * t
    return Sides(1.0 / np.sqrt(2.0 * np.sinh(u)),
                 1.0 / (2.0 * np.sinh(u / 2.0)))


def exponential_absorption(x, mu, nu):
    """x^mu exp(-nu x) <= (2 mu / (e nu))^mu exp(-nu x / 2) for x >= 0."""
    lhs = x ** mu * np.exp(-nu * x)
    rhs = (2.0 * mu / (math.e * nu)) ** mu * np.exp(-nu * x / 2.0)
    return Sides(lhs, rhs)


def convolution_coefficients(alpha, t, s):
    """Collapse of the Gaussian-convolution coefficients.

    With a, b = tanh, coth of alpha*s/2 and c, d = tanh, coth of
    alpha*(t-s)/2 the convolution of two Mehler exponents reduces to a
    single Mehler exponent at time t.
    """
    a = np.tanh(alpha * s / 2.0)
    b = _coth(alpha * s / 2.0)
    c = np.tanh(alpha * (t - s) / 2.0)
    dd = _coth(alpha * (t - s) / 2.0)
    total = a + b + c + dd
    u = alpha * t
    return ConvolutionCoefficients(
        total=Sides(total, 2.0 * np.sinh(u)
                    / (np.sinh(alpha * s) * np.sinh(alpha * (t - s)))),
        quadratic=Sides((b * (c + dd) + a * (dd + c) + 4.0 * a * b) / total,
                        2.0 * _coth(u)),
        cross=Sides((b - a) * (dd - c) / total,
                    _coth(u / 2.0) - np.tanh(u / 2.0)),
    )


def _convolution_check(part):
    def check(alpha, t, s):
        return getattr(convolution_coefficients(alpha, t, s), part)
    return check


# name, kind, argument names, check
IDENTITY_SUITE = (
    ('sinh-doubling', EQUAL, ('alpha', 't'), sinh_doubling),
    ('coth-half-angle', EQUAL, ('alpha', 't'), coth_half_angle),
    ('coth-sum', EQUAL, ('alpha', 't', 's'), coth_sum),
    ('tanh-sum', EQUAL, ('alpha', 't', 's'), tanh_sum),
    ('tanh-sum-product', EQUAL, ('alpha', 't', 's'), tanh_sum_product),
    ('tanh-sum-lower', UPPER, ('alpha', 't', 's'), tanh_sum_lower),
    ('coth-lower', UPPER, ('alpha',), coth_lower),
    ('coth-upper', UPPER, ('alpha',), coth_upper),
    ('sinh-root', EQUAL, ('alpha', 't'), sinh_root),
    ('sinh-root-bound', UPPER, ('alpha', 't'), sinh_root_bound),
    ('exponential-absorption', UPPER, ('x', 'mu', 'nu'),
     exponential_absorption),
    ('convolution-total', EQUAL, ('alpha', 't', 's'),
     _convolution_check('total')),
    ('convolution-quadratic', EQUAL, ('alpha', 't', 's'),
     _convolution_check('quadratic')),
    ('convolution-cross', EQUAL, ('alpha', 't', 's'),
     _convolution_check('cross')),
)


def sample_arguments(n_points, seed):
    """Random arguments shared by every check of the suite."""
    rng = np.random.default_rng(seed)
    t = rng.uniform(*TIME_RANGE, n_points)
    return {
        'alpha': rng.uniform(*ALPHA_RANGE, n_points),
        't': t,
        's': t * rng.uniform(0.05, 0.95, n_points),
        'x': rng.uniform(*ABSCISSA_RANGE, n_points),
        'mu': rng.uniform(*POWER_RANGE, n_points),
        'nu': rng.uniform(*POWER_RANGE, n_points),
    }


def evaluate(name, kind, sides, arguments, tol=IDENTITY_TOL):
    """Turn the two sides of a check into an EstimateOutcome.

    Identities report the largest relative residual, inequalities the
    largest ratio lhs/rhs.
    """
    lhs = np.asarray(sides.lhs, dtype=float)
    rhs = np.asarray(sides.rhs, dtype=float)
    if kind == EQUAL:
        ratios = np.abs(lhs - rhs) / np.abs(rhs)
        limit = tol
    else:
        ratios = lhs / rhs
        limit = 1.0 + tol
    worst = int(np.argmax(ratios))
    point = tuple((key, float(values[worst]))
                  for key, values in arguments.items())
    holds = bool(np.all(np.isfinite(ratios)) and ratios[worst] <= limit)
    if not holds:
        logger.warning('%s fails at %s: ratio %.3e', name, point,
                       ratios[worst])
    return EstimateOutcome(name=name, holds=holds,
                           worst_ratio=float(ratios[worst]),
                           worst_point=point)


def run_identity_suite(n_points=100, seed=0, tol=IDENTITY_TOL):
    """Check every identity and inequality on n_points random arguments."""
    arguments = sample_arguments(n_points, seed)
    outcomes = []
    for name, kind, keys, check in IDENTITY_SUITE:
        used = {key: arguments[key] for key in keys}
        sides = check(*used.values())
        outcomes.append(evaluate(name, kind, sides, used, tol=tol))
    return outcomes
