"""
Closed-form semigroup kernels.

Kernels are evaluated as logarithms and exponentiated only on return, so
that large kappa*t neither overflows nor underflows. Points are arrays
whose last axis holds the d coordinates; for d = 1 plain scalars and
1-D arrays of positions are accepted as well.
"""
import logging
import math
from collections import namedtuple

import numpy as np

from core.exceptions import DomainError
from core.models import (
    HermiteBasisEval,
    TimePoint,
    WidenFactor,
)

logger = logging.getLogger(__name__)

LOG_2PI = math.log(2.0 * math.pi)
# Uniform bound |H_s(x)| exp(-x^2/2) <= c_H sqrt(2^s s!).
CRAMER_CONSTANT = 1.086435
IMAGE_RELATIVE_CUTOFF = 1e-16
IMAGE_MAX_CUTOFF = 10000
# sine series replaces the image sum for t >= ratio * L^2
SINE_SERIES_MIN_RATIO = 0.5
ROUNDING_SLACK = 8.0
EPSILON = np.finfo(float).eps
HERMITE_MAX_ORDER = 500

BoxKernelValue = namedtuple('BoxKernelValue', ['value', 'tail_bound', 'm_max'])
BoxKernelDerivatives = namedtuple('BoxKernelDerivatives',
                                  ['gradient', 'laplacian'])
SpectralSum = namedtuple('SpectralSum', ['value', 'tail_bound', 'order'])


def as_points(x, d):
    """Return x as a float array of shape (..., d)."""
    points = np.asarray(x, dtype=float)
    if d == 1 and (points.ndim == 0 or points.shape[-1] != 1):
        points = points[..., np.newaxis]
    if points.shape[-1] != d:
        raise DomainError(
            f'Points must have {d} coordinates, got shape {points.shape}.'
        )
    return points


def _unwrap(values):
    values = np.asarray(values)
    if values.ndim == 0:
        return float(values)
    return values


def _time(t):
    return TimePoint(float(t)).t


def log_sinh(u):
    """log(sinh(u)) for u > 0 without overflow."""
    u = np.asarray(u, dtype=float)
    return u + np.log(-np.expm1(-2.0 * u)) - math.log(2.0)


def log_heat_kernel(x, y, t, d=1):
    """Logarithm of the free heat kernel."""
    t = _time(t)
    x = as_points(x, d)
    y = as_points(y, d)
    sq = np.sum((x - y) ** 2, axis=-1)
    return _unwrap(-0.5 * d * (LOG_2PI + math.log(t)) - sq / (2.0 * t))


def heat_kernel(x, y, t, d=1):
    """Free heat kernel prod_j (2 pi t)^(-1/2) exp(-(x_j - y_j)^2 / 2t)."""
    return _unwrap(np.exp(log_heat_kernel(x, y, t, d)))


def _mehler_coefficients(kappa, t):
    half = kappa * t / 2.0
    return math.tanh(half), 1.0 / math.tanh(half)


def log_mehler_kernel(x, y, t, p, g=WidenFactor()):
    """Logarithm of the (widened) Mehler kernel."""
    t = _time(t)
    if p.kappa == 0:
        raise DomainError(
            'kappa = 0 has no Mehler kernel; use heat_kernel instead.'
        )
    x = as_points(x, p.d)
    y = as_points(y, p.d)
    tanh_half, coth_half = _mehler_coefficients(p.kappa, t)
    quad = np.sum((x + y) ** 2 * tanh_half + (x - y) ** 2 * coth_half,
                  axis=-1)
    log_norm = 0.5 * p.d * (math.log(p.kappa) - LOG_2PI
                            - float(log_sinh(p.kappa * t)))
    return _unwrap(log_norm - p.kappa / (4.0 * g.gamma) * quad)


def mehler_kernel(x, y, t, p, g=WidenFactor()):
    """Mehler kernel of the oscillator semigroup, widened by gamma."""
    return _unwrap(np.exp(log_mehler_kernel(x, y, t, p, g)))


def _image_log_tail(M, L, t):
    """log of the bound on all image terms with |m| > M."""
    q = math.exp(-2.0 * L * L * (2 * M + 1) / t)
    return (math.log(4.0) - 0.5 * (LOG_2PI + math.log(t))
            - 2.0 * M * M * L * L / t - math.log1p(-q))


def _auto_image_cutoff(x, y, t, L):
    # the direct image sets the scale of the sum
    log_scale = (-0.5 * (LOG_2PI + math.log(t))
                 - float(np.max((x - y) ** 2)) / (2.0 * t))
    threshold = math.log(IMAGE_RELATIVE_CUTOFF) + log_scale
    M = 1
    while _image_log_tail(M, L, t) >= threshold and M < IMAGE_MAX_CUTOFF:
        M += 1
    logger.debug('image cutoff m_max=%d for L=%g t=%g', M, L, t)
    return M


def _sine_rate(t, L):
    return t * math.pi ** 2 / (2.0 * L * L)


def _sine_log_tail(K, L, t):
    """log of the bound on all sine modes k > K."""
    rate = _sine_rate(t, L)
    q = math.exp(-rate * (2 * K + 3))
    return math.log(2.0 / L) - rate * (K + 1) ** 2 - math.log1p(-q)


def _auto_sine_cutoff(t, L):
    # the ground mode sets the scale of the sum
    threshold = (math.log(IMAGE_RELATIVE_CUTOFF) + math.log(2.0 / L)
                 - _sine_rate(t, L))
    K = 1
    while _sine_log_tail(K, L, t) >= threshold and K < IMAGE_MAX_CUTOFF:
        K += 1
    logger.debug('sine cutoff %d for L=%g t=%g', K, L, t)
    return K


def _image_offsets(x, y, L, M):
    m = np.arange(-M, M + 1, dtype=float)
    shape = (-1,) + (1,) * np.ndim(x)
    m = m.reshape(shape)
    direct = x - y + 2.0 * m * L
    reflected = x + y - 2.0 * m * L - L
    return direct, reflected


def _settle(value, rounding, tail):
    """Zero out values inside the rounding band and widen the tail by it."""
    value = np.where(np.abs(value) <= rounding, 0.0, value)
    return value, np.full_like(value, tail) + 2.0 * rounding


def _box_kernel_1d(x, y, t, L, M):
    """Signed image sum, scaled by its largest term."""
    direct, reflected = _image_offsets(x, y, L, M)
    exponents = np.concatenate([-direct ** 2, -reflected ** 2]) / (2.0 * t)
    signs = np.concatenate([np.ones_like(direct), -np.ones_like(reflected)])
    top = np.max(exponents, axis=0)
    scaled = np.exp(exponents - top)
    scale = np.exp(top - 0.5 * (LOG_2PI + math.log(t)))
    value = scale * np.sum(signs * scaled, axis=0)
    # summation error plus the error carried by each exponent
    weight = len(exponents) + np.abs(exponents) + np.abs(top)
    rounding = (ROUNDING_SLACK * EPSILON * scale
                * np.sum(weight * scaled, axis=0))
    return _settle(value, rounding, math.exp(_image_log_tail(M, L, t)))


def _box_sine_series_1d(x, y, t, L, K):
    """Eigenfunction form of the box kernel; used when t is large."""
    rate = _sine_rate(t, L)
    k = np.arange(1, K + 1, dtype=float).reshape((-1,) + (1,) * np.ndim(x))
    weights = (2.0 / L) * np.exp(-rate * k ** 2)
    phase = math.pi / L * k
    terms = (weights * np.sin(phase * (x + 0.5 * L))
             * np.sin(phase * (y + 0.5 * L)))
    value = np.sum(terms, axis=0)
    weight = K + rate * k ** 2 + math.pi * k
    rounding = ROUNDING_SLACK * EPSILON * np.sum(weight * weights, axis=0)
    return _settle(value, rounding, math.exp(_sine_log_tail(K, L, t)))


def product_bound(values, tails):
    """Error bound of prod(values) given per-factor error bounds.

    Expands prod(|v| + e) - prod(|v|) factor by factor so that tiny tails
    are not lost against large values.
    """
    magnitude = np.abs(values[0])
    error = tails[0]
    for value, tail in zip(values[1:], tails[1:]):
        error = error * (np.abs(value) + tail) + magnitude * tail
        magnitude = magnitude * np.abs(value)
    return error + (len(values) - 1) * EPSILON * magnitude


def _check_inside(box, *arrays):
    for points in arrays:
        if not np.all(box.contains(points)):
            raise DomainError(
                f'Points must lie in the closed box of side {box.L}.'
            )


def dirichlet_box_kernel(x, y, t, box, d=1, m_max=None):
    """Dirichlet heat kernel of the cube.

    Returns the truncated image sum over |m| <= m_max in every direction
    together with a rigorous bound on the omitted terms and on rounding.
    m_max=None picks the smallest cutoff whose tail is below 1e-16 of the
    direct term; for t >= L^2/2 it sums the sine eigenfunction series
    instead, where the image sum cancels badly, and m_max reports the
    number of sine modes.
    """
    t = _time(t)
    x = as_points(x, d)
    y = as_points(y, d)
    _check_inside(box, x, y)
    if m_max is not None and m_max < 1:
        raise DomainError(f'm_max must be >= 1, got {m_max}.')
    sine_series = (m_max is None
                   and t >= SINE_SERIES_MIN_RATIO * box.L ** 2)

    values = []
    tails = []
    cutoffs = []
    for j in range(d):
        xj, yj = np.broadcast_arrays(x[..., j], y[..., j])
        if sine_series:
            K = _auto_sine_cutoff(t, box.L)
            value, tail = _box_sine_series_1d(xj, yj, t, box.L, K)
        else:
            K = m_max if m_max is not None else _auto_image_cutoff(
                xj, yj, t, box.L)
            value, tail = _box_kernel_1d(xj, yj, t, box.L, K)
        values.append(value)
        tails.append(tail)
        cutoffs.append(K)

    value = np.prod(values, axis=0)
    return BoxKernelValue(_unwrap(value),
                          _unwrap(product_bound(values, tails)),
                          max(cutoffs))


def _box_derivatives_1d(x, y, t, L, M):
    direct, reflected = _image_offsets(x, y, L, M)
    norm = 1.0 / math.sqrt(2.0 * math.pi * t)
    g_direct = norm * np.exp(-direct ** 2 / (2.0 * t))
    g_reflected = norm * np.exp(-reflected ** 2 / (2.0 * t))
    value = np.sum(g_direct - g_reflected, axis=0)
    first = np.sum(-direct / t * g_direct + reflected / t * g_reflected,
                   axis=0)
    second = np.sum((direct ** 2 / t ** 2 - 1.0 / t) * g_direct
                    - (reflected ** 2 / t ** 2 - 1.0 / t) * g_reflected,
                    axis=0)
    return value, first, second


def dirichlet_box_kernel_derivatives(x, y, t, box, d=1, m_max=None):
    """Analytic x-gradient and x-Laplacian of the image-sum kernel."""
    t = _time(t)
    x = as_points(x, d)
    y = as_points(y, d)
    _check_inside(box, x, y)

    parts = []
    for j in range(d):
        xj, yj = np.broadcast_arrays(x[..., j], y[..., j])
        # one extra image keeps the derivative tails below the value tail
        M = (m_max if m_max is not None
             else _auto_image_cutoff(xj, yj, t, box.L) + 1)
        parts.append(_box_derivatives_1d(xj, yj, t, box.L, M))

    values = [part[0] for part in parts]
    gradient = []
    laplacian = 0.0
    for j, (_, first, second) in enumerate(parts):
        others = np.prod([v for i, v in enumerate(values) if i != j], axis=0)
        gradient.append(first * others)
        laplacian = laplacian + second * others
    return BoxKernelDerivatives(np.stack(gradient, axis=-1),
                                _unwrap(laplacian))


def hermite_table(xi, order_max):
    """Normalized Hermite functions of xi, shape (order_max + 1, ...).

    Uses the three-term recurrence for the normalized functions,
    phi_{s+1} = xi sqrt(2/(s+1)) phi_s - sqrt(s/(s+1)) phi_{s-1},
    which stays finite where the raw polynomials overflow.
    """
    xi = np.asarray(xi, dtype=float)
    table = np.empty((order_max + 1,) + xi.shape)
    table[0] = math.pi ** -0.25 * np.exp(-xi ** 2 / 2.0)
    if order_max >= 1:
        table[1] = math.sqrt(2.0) * xi * table[0]
    for s in range(1, order_max):
        table[s + 1] = (xi * math.sqrt(2.0 / (s + 1)) * table[s]
                        - math.sqrt(s / (s + 1.0)) * table[s - 1])
    return table


def hermite_functions(x, p, order_max):
    """Oscillator eigenfunctions phi_0..phi_S of stiffness kappa at x."""
    if p.kappa <= 0:
        raise DomainError('Hermite functions need kappa > 0.')
    if order_max < 0 or order_max > HERMITE_MAX_ORDER:
        raise DomainError(
            f'order_max must lie in [0, {HERMITE_MAX_ORDER}], '
            f'got {order_max}.'
        )
    scale = p.kappa ** 0.25
    values = scale * hermite_table(math.sqrt(p.kappa) * float(x), order_max)
    return HermiteBasisEval(order_max=order_max, values=values)


def mehler_via_spectral_sum(x, y, t, p, S):
    """Eigenfunction expansion of the Mehler kernel truncated at order S.

    The tail bound uses |phi_s| <= kappa^(1/4) c_H for every s.
    """
    t = _time(t)
    if p.kappa <= 0:
        raise DomainError('The spectral sum needs kappa > 0.')
    if S < 0 or S > HERMITE_MAX_ORDER:
        raise DomainError(
            f'S must lie in [0, {HERMITE_MAX_ORDER}], got {S}.'
        )
    x = as_points(x, p.d)
    y = as_points(y, p.d)
    root = math.sqrt(p.kappa)
    weights = np.exp(-t * p.kappa * (np.arange(S + 1) + 0.5))
    weights = weights.reshape((-1,) + (1,) * (np.ndim(x) - 1))
    ratio = math.exp(-t * p.kappa)
    tail = (CRAMER_CONSTANT ** 2 * root
            * math.exp(-t * p.kappa * (S + 1.5)) / (1.0 - ratio))

    partials = []
    for j in range(p.d):
        phi_x = root ** 0.5 * hermite_table(root * x[..., j], S)
        phi_y = root ** 0.5 * hermite_table(root * y[..., j], S)
        partials.append(np.sum(weights * (phi_x * phi_y), axis=0))

    value = np.prod(partials, axis=0)
    bound = product_bound(partials, [tail] * p.d)
    return SpectralSum(_unwrap(value), _unwrap(bound), S)


def gaussian_product_integral(a, b, c, dd, x, y):
    """Closed form of the integral over z of two two-sided Gaussians.

    Integrates exp(-[a(x+z)^2 + b(x-z)^2]) exp(-[c(z+y)^2 + dd(z-y)^2])
    over the real line.
    """
    for name, value in (('a', a), ('b', b), ('c', c), ('dd', dd)):
        if not value > 0:
            raise DomainError(
                f'Coefficient {name} must be > 0, got {value!r}.'
            )
    total = a + b + c + dd
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    # completing the square in z leaves +2(a-b)(c-dd)xy/total in the
    # exponent of the result
    exponent = ((b * (c + dd) + a * (dd + c) + 4.0 * a * b) * x ** 2
                + (b * (c + dd) + a * (dd + c) + 4.0 * c * dd) * y ** 2
                - 2.0 * (a - b) * (c - dd) * x * y) / total
    return _unwrap(math.sqrt(math.pi / total) * np.exp(-exponent))

